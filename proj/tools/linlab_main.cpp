#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "linlab/experiment.hpp"
#include "linlab/fault.hpp"
#include "linlab/goldens.hpp"
#include "linlab/linearize.hpp"
#include "linlab/trace_io.hpp"
#include "linlab/workload.hpp"

namespace {

using namespace linlab;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LINLAB_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

BackendKind parse_backend(const std::string& name) {
  auto k = backend_from_name(name);
  if (!k) throw CLI::ValidationError("--registers", "unknown back-end " + name);
  return *k;
}

game::AdversaryKind parse_adversary(const std::string& name) {
  auto k = game::adversary_from_name(name);
  if (!k) throw CLI::ValidationError("--adversary", "unknown adversary " + name);
  return *k;
}

TraceFile game_trace(const game::GameConfig& cfg, const game::GameRunResult& r) {
  TraceFile t;
  t.meta.trace = "game";
  t.meta.n = cfg.n;
  t.meta.seed = cfg.seed;
  t.meta.adversary = game::adversary_name(cfg.adversary);
  t.meta.bounded = cfg.bounded;
  t.meta.rounds = cfg.rounds;
  t.meta.registers = game::game_registers(cfg.backend);
  t.history = r.run.history;
  return t;
}

History select_register(const TraceFile& t, const std::string& reg) {
  if (reg.empty()) {
    if (t.meta.registers.size() != 1)
      throw ConfigError("trace has several registers; pass --register");
    return t.history;
  }
  return project(t.history, reg);
}

std::string register_of(const TraceFile& t, const std::string& chosen) {
  if (!chosen.empty()) return chosen;
  if (t.meta.registers.size() != 1)
    throw ConfigError("trace has several registers; pass --register");
  return t.meta.registers.front().name;
}

void emit_linearization(const Linearization& lin, const std::string& out_path) {
  if (out_path.empty()) {
    write_linearization(lin, std::cout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw TraceError("cannot write " + out_path);
  write_linearization(lin, out);
}

int cmd_simulate_game(const game::GameConfig& cfg, const std::string& trace_out) {
  game::GameRunResult r = game::run_game(cfg);
  std::cout << "outcome: "
            << (r.run.outcome == Outcome::all_returned ? "all_returned" : "step_budget_exhausted")
            << "\n";
  std::cout << "steps: " << r.run.steps << "\n";
  std::cout << "termination_round: " << r.termination_round << "\n";
  std::cout << "rounds_per_proc:";
  for (std::uint64_t x : r.run.rounds_per_proc) std::cout << ' ' << x;
  std::cout << "\n";
  if (!trace_out.empty()) write_trace_file(game_trace(cfg, r), trace_out);
  return kExitOk;
}

int cmd_experiment(const ExperimentConfig& cfg, const std::string& csv_out) {
  ExperimentReport report = run_experiment(cfg);
  print_report(report, std::cout);
  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    if (!out) throw TraceError("cannot write " + csv_out);
    write_csv(report, out);
  }
  return kExitOk;
}

int cmd_linearize(const std::string& algo, const std::string& trace_path, const std::string& reg,
                  const std::string& out_path) {
  TraceFile t = read_trace_file(trace_path);
  std::string target = register_of(t, reg);
  History h = select_register(t, reg);
  Value initial = checker_initial(t.meta, target);

  if (algo == "f-vector") {
    VectorLinResult r = vector_run_linearization(h);
    CheckResult batches = check_vector_batches(h, r);
    if (!batches.ok) {
      std::cerr << "batch invariant violated: " << batches.reason << "\n";
      return kExitViolation;
    }
    emit_linearization(r.lin, out_path);
    return kExitOk;
  }
  if (algo == "oracle") {
    OracleResult r = check_linearizable(h, initial);
    if (r.status == OracleStatus::refused) {
      std::cerr << "refused: more than " << kOracleMaxOps << " operations\n";
      return kExitUsage;
    }
    if (r.status == OracleStatus::none) {
      std::cout << "none\n";
      return kExitViolation;
    }
    emit_linearization(r.lin, out_path);
    return kExitOk;
  }
  if (algo == "f-star") {
    OracleResult r = check_linearizable(h, initial);
    if (r.status == OracleStatus::refused) {
      std::cerr << "refused: more than " << kOracleMaxOps << " operations\n";
      return kExitUsage;
    }
    if (r.status == OracleStatus::none) {
      std::cout << "none\n";
      return kExitViolation;
    }
    emit_linearization(drop_trailing_pending_write(h, r.lin, initial), out_path);
    return kExitOk;
  }
  throw CLI::ValidationError("--algo", "unknown algorithm " + algo);
}

int cmd_check(const std::string& mode, const std::string& trace_path, const std::string& lin_path,
              const std::string& reg) {
  TraceFile t = read_trace_file(trace_path);
  std::string target = register_of(t, reg);
  History h = select_register(t, reg);
  Value initial = checker_initial(t.meta, target);
  Linearization lin = read_linearization_file(lin_path);

  if (mode == "lin") {
    CheckResult r = check_linearization(h, lin, initial);
    if (!r.ok) {
      std::cout << "violation: " << r.reason << "\n";
      return kExitViolation;
    }
    std::cout << "ok\n";
    return kExitOk;
  }
  if (mode == "wsl-prefix") {
    VectorLinResult full = vector_run_linearization(h);
    if (!(full.lin == lin)) {
      std::cout << "violation: supplied linearization differs from the recomputed one\n";
      return kExitViolation;
    }
    std::vector<PrefixFamilyEntry> family;
    std::vector<Time> cuts;
    for (const Event& e : h.events) cuts.push_back(e.time);
    for (const CellWrite& c : h.cell_writes) cuts.push_back(c.time);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (Time cut : cuts) {
      History g = history_prefix(h, cut);
      family.push_back(PrefixFamilyEntry{g, vector_run_linearization(g).lin});
    }
    family.push_back(PrefixFamilyEntry{h, full.lin});
    CheckResult r = check_wsl_prefixes(family, initial);
    if (!r.ok) {
      std::cout << "violation: " << r.reason << "\n";
      return kExitViolation;
    }
    std::cout << "ok\n";
    return kExitOk;
  }
  throw CLI::ValidationError("--mode", "unknown mode " + mode);
}

int cmd_refute(const std::string& g_path, const std::vector<std::string>& ext_paths,
               const std::string& reg) {
  TraceFile gt = read_trace_file(g_path);
  std::string target = register_of(gt, reg);
  History g = select_register(gt, reg);
  Value initial = checker_initial(gt.meta, target);
  std::vector<History> exts;
  for (const std::string& p : ext_paths) exts.push_back(select_register(read_trace_file(p), reg));

  RefuteResult r = refute_wsl(g, exts, initial);
  if (r.refused) {
    std::cerr << "refused: instance too large for exhaustive enumeration\n";
    return kExitUsage;
  }
  if (!r.refuted) {
    std::cout << "not refuted; surviving linearization:";
    for (OpId id : r.survivor->ops) std::cout << ' ' << id;
    std::cout << "\n";
    return kExitViolation;
  }
  std::cout << "refuted: every linearization of the base fails in some extension\n";
  for (const auto& [lin, ext] : r.witness) {
    std::cout << "  [";
    for (std::size_t i = 0; i < lin.ops.size(); ++i)
      std::cout << (i ? " " : "") << lin.ops[i];
    std::cout << "] -> extension " << ext_paths[ext] << "\n";
  }
  return kExitOk;
}

int cmd_counterexample(const std::string& out_dir) {
  CounterexampleTriple ce = build_counterexample();
  std::filesystem::create_directories(out_dir);
  auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
  write_trace_file(ce.g, path("lamport_g.trace.jsonl"));
  write_trace_file(ce.h_case1, path("lamport_case1.trace.jsonl"));
  write_trace_file(ce.h_case2, path("lamport_case2.trace.jsonl"));
  std::cout << "wrote lamport_g.trace.jsonl lamport_case1.trace.jsonl lamport_case2.trace.jsonl\n";
  return kExitOk;
}

int cmd_goldens(const std::string& dir, bool write) {
  if (write) {
    write_goldens_to(dir);
    std::cout << "wrote goldens to " << dir << "\n";
    return kExitOk;
  }
  std::vector<std::string> problems = check_goldens_against(dir);
  if (problems.empty()) {
    std::cout << "ok: goldens regenerate bit-identically\n";
    return kExitOk;
  }
  for (const std::string& p : problems) std::cout << "mismatch: " << p << "\n";
  return kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"register linearizability lab: simulator, checkers, experiments"};
  app.require_subcommand(1);

  std::uint32_t n = 3;
  std::uint64_t seed = default_seed();
  std::uint64_t rounds = 100;
  std::uint64_t max_steps = 1'000'000;
  std::string registers = "atomic";
  std::string adversary = "random";
  bool bounded = false;

  auto add_game_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", n, "process count (>= 3)");
    cmd->add_option("--seed", seed, "base seed (default: LINLAB_SEED or 1)");
    cmd->add_option("--rounds", rounds, "round cap for scripted adversaries");
    cmd->add_option("--max-steps", max_steps, "decision budget");
    cmd->add_option("--registers", registers, "atomic|lin-adv|wsl-adv|alg2|alg4");
    cmd->add_option("--adversary", adversary, "random|theorem1|theorem1-wsl");
    cmd->add_option("--bounded", bounded, "use the bounded-token variant");
  };

  auto* sim_cmd = app.add_subcommand("simulate-game", "run one game instance");
  std::string trace_out;
  add_game_flags(sim_cmd);
  sim_cmd->add_option("--trace-out", trace_out, "write the JSONL trace here");

  auto* exp_cmd = app.add_subcommand("experiment", "seeded termination trials");
  std::uint32_t trials = 1000;
  std::string csv_out;
  add_game_flags(exp_cmd);
  exp_cmd->add_option("--trials", trials, "number of seeded trials");
  exp_cmd->add_option("--csv-out", csv_out, "write per-trial CSV here");

  auto* lin_cmd = app.add_subcommand("linearize", "linearize a trace");
  std::string algo = "f-vector";
  std::string trace_path, out_path, reg_name;
  lin_cmd->add_option("--algo", algo, "f-vector|f-star|oracle")->required();
  lin_cmd->add_option("trace", trace_path, "JSONL trace")->required();
  lin_cmd->add_option("--out", out_path, "write op ids here (default: stdout)");
  lin_cmd->add_option("--register", reg_name, "project this register first");

  auto* check_cmd = app.add_subcommand("check", "check a linearization");
  std::string mode = "lin";
  std::string check_trace, check_lin;
  check_cmd->add_option("--mode", mode, "lin|wsl-prefix")->required();
  check_cmd->add_option("trace", check_trace, "JSONL trace")->required();
  check_cmd->add_option("lin", check_lin, "linearization file")->required();
  check_cmd->add_option("--register", reg_name, "project this register first");

  auto* refute_cmd = app.add_subcommand("refute-wsl", "refute prefix-stable write orders");
  std::string refute_g;
  std::vector<std::string> refute_exts;
  refute_cmd->add_option("base", refute_g, "base trace")->required();
  refute_cmd->add_option("extensions", refute_exts, "extension traces")->required();
  refute_cmd->add_option("--register", reg_name, "project this register first");

  auto* ce_cmd = app.add_subcommand("counterexample-lamport",
                                    "emit the Lamport-register counterexample traces");
  std::string out_dir = ".";
  ce_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* gold_cmd = app.add_subcommand("goldens", "regenerate or verify golden artifacts");
  std::string gold_dir = "data/goldens";
  bool gold_write = false;
  gold_cmd->add_option("--dir", gold_dir, "golden directory");
  gold_cmd->add_flag("--write", gold_write, "write instead of verify");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed() || exp_cmd->parsed()) {
      game::GameConfig cfg;
      cfg.n = n;
      cfg.seed = seed;
      cfg.rounds = rounds;
      cfg.max_steps = max_steps;
      cfg.backend = parse_backend(registers);
      cfg.adversary = parse_adversary(adversary);
      cfg.bounded = bounded;
      if (sim_cmd->parsed()) return cmd_simulate_game(cfg, trace_out);
      ExperimentConfig ecfg;
      ecfg.game = cfg;
      ecfg.trials = trials;
      return cmd_experiment(ecfg, csv_out);
    }
    if (lin_cmd->parsed()) return cmd_linearize(algo, trace_path, reg_name, out_path);
    if (check_cmd->parsed()) return cmd_check(mode, check_trace, check_lin, reg_name);
    if (refute_cmd->parsed()) return cmd_refute(refute_g, refute_exts, reg_name);
    if (ce_cmd->parsed()) return cmd_counterexample(out_dir);
    if (gold_cmd->parsed()) return cmd_goldens(gold_dir, gold_write);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}
