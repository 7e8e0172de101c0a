// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run as: linlab_acceptance [golden-dir]

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "linlab/experiment.hpp"
#include "linlab/goldens.hpp"
#include "linlab/linearize.hpp"
#include "linlab/workload.hpp"

using namespace linlab;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

std::vector<Time> prefix_cuts(const History& h) {
  std::vector<Time> cuts;
  for (const Event& e : h.events) cuts.push_back(e.time);
  for (const CellWrite& c : h.cell_writes) cuts.push_back(c.time);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// ---- criterion 1: adversarial non-termination over lin-adv registers ----
void criterion1() {
  std::ostringstream detail;
  bool ok = true;
  for (std::uint32_t n : {3u, 5u}) {
    for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
      game::GameConfig cfg;
      cfg.n = n;
      cfg.seed = seed;
      cfg.rounds = 100;
      cfg.backend = BackendKind::lin_adv;
      cfg.adversary = game::AdversaryKind::retro;
      cfg.max_steps = 10'000'000;
      game::GameRunResult r;
      try {
        r = game::run_game(cfg);  // throws on any monitor or safety violation
      } catch (const std::exception& e) {
        ok = false;
        detail << "n=" << n << " seed=" << seed << ": " << e.what();
        break;
      }
      if (r.run.outcome != Outcome::step_budget_exhausted) {
        ok = false;
        detail << "n=" << n << " seed=" << seed << ": run terminated";
        break;
      }
      for (std::uint64_t rounds : r.run.rounds_per_proc)
        if (rounds < 100) {
          ok = false;
          detail << "n=" << n << " seed=" << seed << ": a process fell short of round 100";
        }

      {
        // round-1 projections through the exhaustive oracle
        game::GameMilestones m = game::parse_game_rounds(r.run.history, n, false);
        Time cut = 0;
        for (const auto& rounds : m.hosts)
          if (rounds.size() > 1) cut = std::max(cut, rounds[1].entered - 1);
        History round1 = history_prefix(r.run.history, cut);
        for (const char* reg : {game::kR1, game::kR2, game::kC}) {
          Value initial = reg == std::string(game::kR2) ? Value(std::int64_t{0}) : Value(Bot{});
          OracleResult o = check_linearizable(project(round1, reg), initial);
          if (o.status != OracleStatus::ok) {
            ok = false;
            detail << "n=" << n << " round-1 projection of " << reg << " not linearizable";
          }
        }
      }
    }
  }
  report(1, "lin-adv schedule reaches round 100 on every seed, projections linearizable", ok,
         detail.str());
}

// ---- criterion 2: guaranteed termination once write order pre-commits ----
void criterion2() {
  bool ok = true;
  std::ostringstream detail;
  for (BackendKind backend :
       {BackendKind::wsl_adv, BackendKind::alg_vector, BackendKind::atomic}) {
    ExperimentConfig cfg;
    cfg.trials = 1000;
    cfg.game.n = 3;
    cfg.game.seed = 1;
    cfg.game.rounds = 64;
    cfg.game.backend = backend;
    cfg.game.adversary = game::AdversaryKind::precommit;
    ExperimentReport rep = run_experiment(cfg);

    if (rep.budget_exhausted != 0) {
      ok = false;
      detail << backend_name(backend) << ": " << rep.budget_exhausted << " trials hit the budget; ";
    }
    if (rep.mean_round > 2.5) {
      ok = false;
      detail << backend_name(backend) << ": mean round " << rep.mean_round << " > 2.5; ";
    }
    for (const auto& [round, stat] : rep.rounds) {
      if (stat.reached < 100) continue;
      if (stat.frequency() > 0.55) {
        ok = false;
        detail << backend_name(backend) << ": round " << round << " continuation "
               << stat.frequency() << " > 0.55; ";
      }
    }
  }
  report(2, "precommit schedule terminates with per-round continuation near one half", ok,
         detail.str());
}

// ---- criterion 3: the vector register's online write order is stable ----
void criterion3() {
  bool ok = true;
  std::ostringstream detail;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 500 && ok; ++seed) {
    MwmrWorkloadConfig cfg;
    cfg.backend = BackendKind::alg_vector;
    cfg.procs = 2 + seed % 3;  // up to 4
    cfg.total_ops = 4 + seed % 5;  // up to 8
    cfg.seed = seed;
    RunResult r = run_random_mwmr(cfg);
    Value initial{VectorCell{Plain(std::int64_t{0}), vts_zeros(cfg.procs)}};

    VectorLinResult full;
    try {
      full = vector_run_linearization(r.history);
    } catch (const std::exception& e) {
      ok = false;
      detail << "seed " << seed << ": " << e.what();
      break;
    }
    CheckResult batches = check_vector_batches(r.history, full);
    if (!batches.ok) {
      ok = false;
      detail << "seed " << seed << " batches: " << batches.reason;
      break;
    }
    CheckResult lin_ok = check_linearization(r.history, full.lin, initial);
    if (!lin_ok.ok) {
      ok = false;
      detail << "seed " << seed << ": " << lin_ok.reason;
      break;
    }
    auto all = enumerate_linearizations(r.history, initial);
    if (!all || std::find(all->begin(), all->end(), full.lin) == all->end()) {
      ok = false;
      detail << "seed " << seed << ": output not among the oracle's linearizations";
      break;
    }
    std::vector<PrefixFamilyEntry> family;
    for (Time cut : prefix_cuts(r.history)) {
      History g = history_prefix(r.history, cut);
      family.push_back({g, vector_run_linearization(g).lin});
    }
    CheckResult stable = check_wsl_prefixes(family, initial);
    if (!stable.ok) {
      ok = false;
      detail << "seed " << seed << ": " << stable.reason;
      break;
    }
    ++checked;
  }
  report(3, "500 random vector-register runs: batch facts, oracle match, prefix stability", ok,
         detail.str().empty() ? std::to_string(checked) + " runs" : detail.str());
}

// ---- criterion 4: the Lamport register is linearizable but refutable ----
void criterion4() {
  bool ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 500 && ok; ++seed) {
    MwmrWorkloadConfig cfg;
    cfg.backend = BackendKind::alg_lamport;
    cfg.procs = 2 + seed % 3;
    cfg.total_ops = 4 + seed % 5;
    cfg.seed = seed;
    RunResult r = run_random_mwmr(cfg);
    Value initial{LamportCell{Plain(std::int64_t{0}), LamportTs{0, cfg.procs}}};
    OracleResult o = check_linearizable(r.history, initial);
    if (o.status != OracleStatus::ok) {
      ok = false;
      detail << "seed " << seed << ": run not linearizable";
    }
  }

  CounterexampleTriple ce = build_counterexample();
  Value initial{LamportCell{Plain(std::int64_t{0}), LamportTs{0, 3}}};
  RefuteResult r = refute_wsl(ce.g.history, {ce.h_case1.history, ce.h_case2.history}, initial);
  if (r.refused || !r.refuted) {
    ok = false;
    detail << "; counterexample not refuted";
  } else {
    std::set<std::vector<OpId>> seqs;
    OpTable g_ops = op_table(ce.g.history);
    for (const auto& [lin, ext] : r.witness) {
      std::vector<OpId> ws = write_sequence(lin, g_ops);
      seqs.insert(ws);
      bool first_write_first = ws == std::vector<OpId>{1, 2};
      if (first_write_first != (ext == 1)) {
        ok = false;
        detail << "; witness does not follow the two-case split";
      }
    }
    if (seqs.size() != 3) {
      ok = false;
      detail << "; expected all three write orders enumerated";
    }
  }
  report(4, "500 random Lamport runs linearizable; counterexample totally refuted", ok,
         detail.str());
}

// ---- criterion 5: single-writer registers are prefix-stable for free ----
void criterion5() {
  bool ok = true;
  std::ostringstream detail;
  const Value initial{std::int64_t{0}};
  std::size_t drops = 0;
  // base function: the longest valid linearization (last one on ties); it
  // keeps pending writes whenever legal, so the trailing-drop branch of the
  // construction genuinely fires
  auto base_lin = [&](const History& g) -> std::optional<Linearization> {
    auto all = enumerate_linearizations(g, initial);
    if (!all || all->empty()) return std::nullopt;
    const Linearization* best = &all->front();
    for (const Linearization& lin : *all)
      if (lin.ops.size() >= best->ops.size()) best = &lin;
    return *best;
  };
  for (std::uint64_t seed = 0; seed < 500 && ok; ++seed) {
    History h = random_swmr_history(1 + seed % 3, 5 + seed % 4, seed);
    std::vector<PrefixFamilyEntry> family;
    for (const Event& e : h.events) {
      History g = history_prefix(h, e.time);
      std::optional<Linearization> base = base_lin(g);
      if (!base) {
        ok = false;
        detail << "seed " << seed << ": prefix not linearizable";
        break;
      }
      Linearization trimmed = drop_trailing_pending_write(g, *base, initial);
      if (trimmed.ops.size() < base->ops.size()) ++drops;
      family.push_back({g, trimmed});

      // retained iff completed or read; writes ordered by start time
      OpTable ops = op_table(g);
      std::set<OpId> in_lin(trimmed.ops.begin(), trimmed.ops.end());
      std::set<OpId> read_ops;
      for (const auto& [id, rec] : ops)
        if (rec.kind == OpKind::read && rec.complete())
          for (const auto& [wid, wrec] : ops)
            if (wrec.kind == OpKind::write && wrec.argument == rec.result) read_ops.insert(wid);
      Time last_start = 0;
      for (OpId id : write_sequence(trimmed, ops)) {
        const OperationRecord& rec = ops.at(id);
        if (!rec.complete() && !read_ops.count(id)) {
          ok = false;
          detail << "seed " << seed << ": kept a pending unread write";
        }
        if (rec.invoke_time < last_start) {
          ok = false;
          detail << "seed " << seed << ": writes out of start order";
        }
        last_start = rec.invoke_time;
      }
      for (const auto& [id, rec] : ops)
        if (rec.kind == OpKind::write && (rec.complete() || read_ops.count(id)) &&
            !in_lin.count(id)) {
          ok = false;
          detail << "seed " << seed << ": dropped a completed-or-read write";
        }
      if (!ok) break;
    }
    if (!ok) break;
    CheckResult stable = check_wsl_prefixes(family, initial);
    if (!stable.ok) {
      ok = false;
      detail << "seed " << seed << ": " << stable.reason;
    }
  }
  if (ok && drops == 0) {
    ok = false;
    detail << "the trailing-drop branch never fired";
  }
  report(5, "500 single-writer histories: trimmed oracle linearizations prefix-stable", ok,
         detail.str().empty() ? std::to_string(drops) + " trailing writes dropped" : detail.str());
}

// ---- criterion 6: the bounded token variant behaves identically ----
void criterion6() {
  bool ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
    {
      game::GameConfig a;
      a.n = 3;
      a.seed = seed;
      a.rounds = 8;
      a.backend = BackendKind::lin_adv;
      a.adversary = game::AdversaryKind::retro;
      game::GameConfig b = a;
      b.bounded = true;
      if (game::decision_table(game::run_game(a).milestones) !=
          game::decision_table(game::run_game(b).milestones)) {
        ok = false;
        detail << "lin-adv seed " << seed << " diverged";
      }
    }
    {
      game::GameConfig a;
      a.n = 3;
      a.seed = seed;
      a.rounds = 64;
      a.backend = BackendKind::wsl_adv;
      a.adversary = game::AdversaryKind::precommit;
      game::GameConfig b = a;
      b.bounded = true;
      if (game::decision_table(game::run_game(a).milestones) !=
          game::decision_table(game::run_game(b).milestones)) {
        ok = false;
        detail << "wsl-adv seed " << seed << " diverged";
      }
    }
  }
  report(6, "bounded and unbounded variants take identical exit decisions on 100 seeds", ok,
         detail.str());
}

// ---- criterion 7: goldens regenerate bit-identically; traces replay ----
void criterion7(const std::string& golden_dir) {
  bool ok = true;
  std::ostringstream detail;
  std::vector<std::string> problems = check_goldens_against(golden_dir);
  for (const std::string& p : problems) {
    ok = false;
    detail << p << "; ";
  }

  // replay: the stored adversarial game trace regenerates from its meta
  try {
    TraceFile stored = read_trace_file(golden_dir + "/game_theorem1_n3.trace.jsonl");
    TraceFile fresh = adversarial_game_trace(stored.meta.n, stored.meta.seed, stored.meta.rounds);
    if (trace_to_string(fresh) != trace_to_string(stored)) {
      ok = false;
      detail << "game trace replay differs";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail << "replay failed: " << e.what();
  }
  report(7, "goldens regenerate bit-identically and stored traces replay", ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::string golden_dir = argc > 1 ? argv[1] : "data/goldens";
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7(golden_dir);
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance suite aborted: " << e.what() << std::endl;
    return 1;
  }
  if (g_failures == 0) {
    std::cout << "all acceptance criteria hold" << std::endl;
    return 0;
  }
  std::cout << g_failures << " criteria failed" << std::endl;
  return 1;
}
