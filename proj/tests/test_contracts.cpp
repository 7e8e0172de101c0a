#include <doctest.h>

#include "linlab/game.hpp"
#include "linlab/linearize.hpp"
#include "linlab/sim.hpp"

using namespace linlab;

namespace {

// Forwards to an inner adversary while checking the strong-adversary
// contract on every decision: commitments only grow, and no coin outcome is
// visible before its flip executed.
class ContractCheckingAdversary final : public Adversary {
 public:
  explicit ContractCheckingAdversary(std::unique_ptr<Adversary> inner)
      : inner_(std::move(inner)) {}

  std::optional<Decision> next(const AdversaryView& view) override {
    // coins revealed so far never exceed flips taken, and never shrink
    REQUIRE(view.coins->size() >= coins_seen_);
    coins_seen_ = view.coins->size();

    for (const char* reg : {game::kR1, game::kR2, game::kC}) {
      const auto* adv = dynamic_cast<const AdversarialBackend*>(&view.registers->at(reg));
      if (!adv) continue;
      std::vector<OpId> log = adv->write_log();
      auto& prev = logs_[reg];
      REQUIRE(is_id_prefix(prev, log));
      prev = log;
    }
    return inner_->next(view);
  }

 private:
  std::unique_ptr<Adversary> inner_;
  std::size_t coins_seen_ = 0;
  std::map<std::string, std::vector<OpId>> logs_;
};

}  // namespace

TEST_CASE("committed write orders only grow during adversarial runs") {
  for (auto kind : {game::AdversaryKind::retro, game::AdversaryKind::precommit}) {
    game::GameConfig cfg;
    cfg.n = 3;
    cfg.seed = 12;
    cfg.rounds = kind == game::AdversaryKind::retro ? 4 : 64;
    cfg.backend =
        kind == game::AdversaryKind::retro ? BackendKind::lin_adv : BackendKind::wsl_adv;
    cfg.adversary = kind;

    SimConfig sim;
    sim.n = cfg.n;
    sim.registers = game::game_registers(cfg.backend);
    sim.seed = cfg.seed;
    ContractCheckingAdversary adversary(game::make_adversary(cfg));
    auto factory = [&](Proc p) { return game::game_program(p, cfg.n, cfg.bounded); };
    RunResult r = run(sim, factory, adversary);
    CHECK((r.outcome == Outcome::all_returned || r.outcome == Outcome::step_budget_exhausted));
  }
}

TEST_CASE("atomic runs linearize in real-time order") {
  SimConfig sim;
  sim.n = 2;
  sim.registers = {RegisterSpec{"R", BackendKind::atomic, Value(std::int64_t{0}), {}}};
  std::vector<std::vector<Action>> scripts = {
      {Action::write("R", Value(std::int64_t{1})), Action::read("R")},
      {Action::write("R", Value(std::int64_t{2})), Action::read("R")}};
  ScriptAdversary adversary({Decision::advance(0), Decision::advance(1), Decision::advance(1),
                             Decision::advance(0), Decision::advance(0), Decision::advance(1)});
  auto factory = [&](Proc p) -> std::unique_ptr<Program> {
    return std::make_unique<ScriptProgram>(scripts[p]);
  };
  RunResult r = run(sim, factory, adversary);

  OracleResult o = check_linearizable(r.history, Value(std::int64_t{0}));
  REQUIRE(o.status == OracleStatus::ok);
  // atomic operations are instantaneous, so the only order is by time
  std::vector<OpId> by_time;
  for (const Event& e : r.history.events)
    if (e.kind == EventKind::invoke) by_time.push_back(e.op);
  CHECK(o.lin.ops == by_time);
}

namespace {

// Records, for every write appended to R1's order, how many coin outcomes
// had been revealed at that moment, plus the token value of the write.
class CommitTimingProbe final : public Adversary {
 public:
  explicit CommitTimingProbe(std::unique_ptr<Adversary> inner) : inner_(std::move(inner)) {}

  struct Entry {
    std::size_t coins_seen;
    Plain value;
  };
  std::vector<Entry> token_commits;  // host token writes only, in log order

  std::optional<Decision> next(const AdversaryView& view) override {
    const auto* adv = dynamic_cast<const AdversarialBackend*>(&view.registers->at(game::kR1));
    REQUIRE(adv != nullptr);
    std::vector<OpId> log = adv->write_log();
    for (std::size_t i = seen_; i < log.size(); ++i) {
      for (const Event& e : view.history->events) {
        if (e.kind != EventKind::invoke || e.op != log[i]) continue;
        if (std::holds_alternative<BitRound>(unwrap(e.value)))
          token_commits.push_back({view.coins->size(), unwrap(e.value)});
        break;
      }
    }
    seen_ = log.size();
    return inner_->next(view);
  }

 private:
  std::unique_ptr<Adversary> inner_;
  std::size_t seen_ = 0;
};

CommitTimingProbe::Entry entry_at(const std::vector<CommitTimingProbe::Entry>& v, std::size_t i) {
  REQUIRE(i < v.size());
  return v[i];
}

}  // namespace

TEST_CASE("retroactive mode orders the tokens after the coin, in coin order") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    game::GameConfig cfg;
    cfg.n = 3;
    cfg.seed = seed;
    cfg.rounds = 4;
    cfg.backend = BackendKind::lin_adv;
    cfg.adversary = game::AdversaryKind::retro;

    SimConfig sim;
    sim.n = cfg.n;
    sim.registers = game::game_registers(cfg.backend);
    sim.seed = cfg.seed;
    CommitTimingProbe probe(game::make_adversary(cfg));
    auto factory = [&](Proc p) { return game::game_program(p, cfg.n, cfg.bounded); };
    RunResult r = run(sim, factory, probe);

    REQUIRE(probe.token_commits.size() == 2 * 4);
    for (std::uint64_t j = 1; j <= 4; ++j) {
      auto first = entry_at(probe.token_commits, 2 * (j - 1));
      auto second = entry_at(probe.token_commits, 2 * (j - 1) + 1);
      // both token writes of round j are ordered only once coin j is out
      CHECK(first.coins_seen == j);
      CHECK(second.coins_seen == j);
      // and the coin side goes first
      std::int64_t c = r.coins[j - 1];
      CHECK(first.value == Plain(BitRound{c, j}));
      CHECK(second.value == Plain(BitRound{1 - c, j}));
    }
  }
}

TEST_CASE("pre-commit mode fixes the token order before the coin, zero side first") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    game::GameConfig cfg;
    cfg.n = 3;
    cfg.seed = seed;
    cfg.rounds = 64;
    cfg.backend = BackendKind::wsl_adv;
    cfg.adversary = game::AdversaryKind::precommit;

    SimConfig sim;
    sim.n = cfg.n;
    sim.registers = game::game_registers(cfg.backend);
    sim.seed = cfg.seed;
    CommitTimingProbe probe(game::make_adversary(cfg));
    auto factory = [&](Proc p) { return game::game_program(p, cfg.n, cfg.bounded); };
    RunResult r = run(sim, factory, probe);
    REQUIRE(r.outcome == Outcome::all_returned);

    std::uint64_t rounds = r.coins.size();
    REQUIRE(probe.token_commits.size() == 2 * rounds);
    for (std::uint64_t j = 1; j <= rounds; ++j) {
      auto first = entry_at(probe.token_commits, 2 * (j - 1));
      auto second = entry_at(probe.token_commits, 2 * (j - 1) + 1);
      // the order is already fixed while only j-1 coins are visible
      CHECK(first.coins_seen == j - 1);
      CHECK(second.coins_seen == j - 1);
      CHECK(first.value == Plain(BitRound{0, j}));
      CHECK(second.value == Plain(BitRound{1, j}));
    }
  }
}

TEST_CASE("the online linearization explains the game's own register traffic") {
  game::GameConfig cfg;
  cfg.n = 3;
  cfg.seed = 22;  // survives two rounds under this seed
  cfg.rounds = 64;
  cfg.backend = BackendKind::alg_vector;
  cfg.adversary = game::AdversaryKind::precommit;
  game::GameRunResult r = game::run_game(cfg);
  REQUIRE(r.run.outcome == Outcome::all_returned);

  for (const char* reg : {game::kR1, game::kR2, game::kC}) {
    History proj = project(r.run.history, reg);
    Plain base = reg == std::string(game::kR2) ? Plain(std::int64_t{0}) : Plain(Bot{});
    Value initial{VectorCell{base, vts_zeros(3)}};

    VectorLinResult full = vector_run_linearization(proj);
    CHECK(check_vector_batches(proj, full).ok);
    CHECK(check_linearization(proj, full.lin, initial).ok);

    std::vector<PrefixFamilyEntry> family;
    std::vector<Time> cuts;
    for (const Event& e : proj.events) cuts.push_back(e.time);
    for (const CellWrite& c : proj.cell_writes) cuts.push_back(c.time);
    std::sort(cuts.begin(), cuts.end());
    for (Time cut : cuts) {
      History g = history_prefix(proj, cut);
      family.push_back({g, vector_run_linearization(g).lin});
    }
    CHECK(check_wsl_prefixes(family, initial).ok);
  }
}
