#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linlab/coin.hpp"
#include "linlab/history.hpp"
#include "linlab/registers.hpp"

namespace linlab {

// One base action of a process program.
struct Action {
  enum class Kind { invoke_read, invoke_write, flip_coin, local, ret };
  Kind kind = Kind::local;
  std::string reg;
  Value value;

  static Action read(std::string r) { return Action{Kind::invoke_read, std::move(r), Value(Bot{})}; }
  static Action write(std::string r, Value v) {
    return Action{Kind::invoke_write, std::move(r), std::move(v)};
  }
  static Action coin() { return Action{Kind::flip_coin, {}, Value(Bot{})}; }
  static Action local() { return Action{Kind::local, {}, Value(Bot{})}; }
  static Action ret() { return Action{Kind::ret, {}, Value(Bot{})}; }
};

// What the previous base action produced, delivered on the next step.
struct LastResult {
  enum class Kind { none, read_value, write_done, coin, local_done };
  Kind kind = Kind::none;
  Plain value;  // read results are delivered unwrapped
  int coin = 0;
};

// Deterministic step function of one simulated process.
class Program {
 public:
  virtual ~Program() = default;
  virtual Action step(const LastResult& last) = 0;
  // Round counter for programs that have one; reported in run results.
  virtual std::uint64_t round() const { return 0; }
};

using ProgramFactory = std::function<std::unique_ptr<Program>(Proc)>;

// One scheduling decision of the adversary.
struct Decision {
  enum class Kind { advance, linearize_commit, choose_read_value };
  Kind kind = Kind::advance;
  Proc proc = 0;            // advance
  std::string reg;          // linearize_commit
  std::vector<OpId> ops;    // linearize_commit
  OpId op = 0;              // choose_read_value
  Value value;              // choose_read_value

  static Decision advance(Proc p) {
    Decision d;
    d.kind = Kind::advance;
    d.proc = p;
    return d;
  }
  static Decision commit(std::string reg, std::vector<OpId> ops) {
    Decision d;
    d.kind = Kind::linearize_commit;
    d.reg = std::move(reg);
    d.ops = std::move(ops);
    return d;
  }
  static Decision choose(OpId op, Value v) {
    Decision d;
    d.kind = Kind::choose_read_value;
    d.op = op;
    d.value = std::move(v);
    return d;
  }
};

enum class ProcStatus { ready, blocked, returned };

struct ProcView {
  ProcStatus status = ProcStatus::ready;
  OpId pending_op = 0;  // meaningful when blocked
};

// Everything a strong adversary may observe: the full history, the coin
// outcomes of flips that have executed, pending operations, process states,
// and its own committed decisions (via the register bank).
struct AdversaryView {
  const History* history = nullptr;
  const std::vector<int>* coins = nullptr;
  const std::map<OpId, PendingOp>* pending = nullptr;
  const std::vector<ProcView>* procs = nullptr;
  const RegisterBank* registers = nullptr;
  std::uint64_t steps = 0;

  OpId last_op() const { return history->events.empty() ? 0 : history->events.back().op; }
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  // Next decision, or nullopt when the schedule is exhausted.
  virtual std::optional<Decision> next(const AdversaryView& view) = 0;
};

struct SimConfig {
  std::uint32_t n = 1;
  std::vector<RegisterSpec> registers;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
};

enum class Outcome { all_returned, step_budget_exhausted };

struct RunResult {
  History history;
  Outcome outcome = Outcome::step_budget_exhausted;
  std::vector<std::uint64_t> rounds_per_proc;
  std::uint64_t steps = 0;
  std::vector<int> coins;
};

// Runs the simulation to completion: every decision of the adversary is
// applied in order until all processes returned, the adversary's schedule is
// exhausted, or max_steps decisions have been applied. Identical
// (config, programs, adversary) always reproduces the identical history.
RunResult run(const SimConfig& config, const ProgramFactory& programs, Adversary& adversary);

// Re-runs and compares against a recorded history; throws ReplayFault naming
// the first differing event. Returns the regenerated result.
RunResult replay(const History& recorded, const SimConfig& config, const ProgramFactory& programs,
                 Adversary& adversary);

// Uniformly advances some process that can take a step on its own (never
// drives adversary-controlled registers).
class RandomAdversary final : public Adversary {
 public:
  explicit RandomAdversary(std::uint64_t seed) : rng_(seed ^ 0x9ad5ea5ca11ULL) {}
  std::optional<Decision> next(const AdversaryView& view) override;

 private:
  Rng rng_;
};

// Replays a fixed decision list; used by golden scripts.
class ScriptAdversary final : public Adversary {
 public:
  explicit ScriptAdversary(std::vector<Decision> script) : script_(std::move(script)) {}
  std::optional<Decision> next(const AdversaryView&) override {
    if (at_ >= script_.size()) return std::nullopt;
    return script_[at_++];
  }

 private:
  std::vector<Decision> script_;
  std::size_t at_ = 0;
};

// Program that performs a fixed list of actions and returns.
class ScriptProgram final : public Program {
 public:
  explicit ScriptProgram(std::vector<Action> actions) : actions_(std::move(actions)) {}
  Action step(const LastResult&) override {
    if (at_ >= actions_.size()) return Action::ret();
    return actions_[at_++];
  }

 private:
  std::vector<Action> actions_;
  std::size_t at_ = 0;
};

}  // namespace linlab
