#include "linlab/sim.hpp"

#include <algorithm>

#include "linlab/fault.hpp"

namespace linlab {

namespace {

class Simulator {
 public:
  Simulator(const SimConfig& config, const ProgramFactory& programs)
      : config_(config), bank_(config.registers, config.n), coin_(config.seed) {
    if (config.n < 1) throw ConfigError("need at least one process");
    for (Proc p = 0; p < config.n; ++p) {
      programs_.push_back(programs(p));
      procs_.push_back(ProcView{});
      last_.push_back(LastResult{});
    }
  }

  RunResult take_result() && {
    RunResult r;
    r.history = std::move(history_);
    r.outcome = outcome_;
    r.steps = steps_;
    r.coins = coins_;
    for (const auto& prog : programs_) r.rounds_per_proc.push_back(prog->round());
    return r;
  }

  void drive(Adversary& adversary) {
    bool clean_end = true;
    while (!all_returned()) {
      if (steps_ >= config_.max_steps) {
        clean_end = false;  // hard cut: pending placements may be mid-flight
        break;
      }
      AdversaryView view;
      view.history = &history_;
      view.coins = &coins_;
      view.pending = &pending_;
      view.procs = &procs_;
      view.registers = &bank_;
      view.steps = steps_;
      std::optional<Decision> d = adversary.next(view);
      if (!d) break;  // schedule exhausted
      apply(*d);
      ++steps_;
    }
    outcome_ = all_returned() ? Outcome::all_returned : Outcome::step_budget_exhausted;
    if (clean_end) bank_.finalize_monitors();
    validate_history(history_);
  }

 private:
  bool all_returned() const {
    return std::all_of(procs_.begin(), procs_.end(),
                       [](const ProcView& p) { return p.status == ProcStatus::returned; });
  }

  void apply(const Decision& d) {
    switch (d.kind) {
      case Decision::Kind::advance: advance(d.proc); return;
      case Decision::Kind::linearize_commit: {
        try {
          bank_.adversarial(d.reg).commit_writes(d.ops);
        } catch (const ConfigError& e) {
          throw SimFault(steps_, e.what());
        }
        return;
      }
      case Decision::Kind::choose_read_value: {
        auto it = pending_.find(d.op);
        if (it == pending_.end())
          throw SimFault(steps_, "choose-read-value for op " + std::to_string(d.op) +
                                     " which is not pending");
        try {
          bank_.adversarial(it->second.reg).choose_read_value(d.op, d.value);
        } catch (const ConfigError& e) {
          throw SimFault(steps_, e.what());
        }
        return;
      }
    }
  }

  void advance(Proc p) {
    if (p >= config_.n) throw SimFault(steps_, "advance of unknown process " + std::to_string(p));
    ProcView& pv = procs_[p];
    if (pv.status == ProcStatus::returned)
      throw SimFault(steps_, "advance of returned process " + std::to_string(p));

    if (pv.status == ProcStatus::blocked) {
      const PendingOp op = pending_.at(pv.pending_op);  // copy: respond() erases the entry
      RegisterBackend& backend = bank_.at(op.reg);
      if (backend.multistep()) {
        std::optional<Value> done = backend.substep(p, tick_++, history_);
        if (done) respond(op, *done);
        return;
      }
      auto* adv = dynamic_cast<AdversarialBackend*>(&backend);
      if (!adv)
        throw SimFault(steps_, "process " + std::to_string(p) + " blocked on " + op.reg +
                                   " which never blocks");
      Value v = adv->respond(op.op, tick_);  // throws MonitorViolation when illegal
      respond(op, v);
      return;
    }

    Action a = programs_[p]->step(std::exchange(last_[p], LastResult{}));
    switch (a.kind) {
      case Action::Kind::invoke_read:
      case Action::Kind::invoke_write: {
        OpKind kind = a.kind == Action::Kind::invoke_read ? OpKind::read : OpKind::write;
        PendingOp op;
        op.op = next_op_++;
        op.proc = p;
        op.reg = a.reg;
        op.kind = kind;
        op.arg = kind == OpKind::write ? a.value : Value(Bot{});
        op.invoke_time = tick_++;
        history_.events.push_back(
            Event{EventKind::invoke, op.op, p, a.reg, kind, op.arg, op.invoke_time});
        std::optional<Value> now = bank_.at(a.reg).invoke(op);
        if (now) {
          pending_.emplace(op.op, op);
          respond(op, *now);
        } else {
          pending_.emplace(op.op, op);
          pv.status = ProcStatus::blocked;
          pv.pending_op = op.op;
        }
        return;
      }
      case Action::Kind::flip_coin: {
        int c = coin_.next();
        coins_.push_back(c);
        last_[p] = LastResult{LastResult::Kind::coin, Plain(Bot{}), c};
        return;
      }
      case Action::Kind::local: {
        last_[p] = LastResult{LastResult::Kind::local_done, Plain(Bot{}), 0};
        return;
      }
      case Action::Kind::ret: {
        pv.status = ProcStatus::returned;
        return;
      }
    }
  }

  void respond(const PendingOp op, const Value& result) {
    Time t = tick_++;
    history_.events.push_back(Event{EventKind::respond, op.op, op.proc, op.reg, op.kind,
                                    op.kind == OpKind::write ? Value(Bot{}) : result, t});
    pending_.erase(op.op);
    ProcView& pv = procs_[op.proc];
    pv.status = ProcStatus::ready;
    pv.pending_op = 0;
    if (op.kind == OpKind::read)
      last_[op.proc] = LastResult{LastResult::Kind::read_value, unwrap(result), 0};
    else
      last_[op.proc] = LastResult{LastResult::Kind::write_done, Plain(Bot{}), 0};
  }

  const SimConfig& config_;
  RegisterBank bank_;
  CoinStream coin_;
  History history_;
  std::vector<std::unique_ptr<Program>> programs_;
  std::vector<ProcView> procs_;
  std::vector<LastResult> last_;
  std::map<OpId, PendingOp> pending_;
  std::vector<int> coins_;
  Outcome outcome_ = Outcome::step_budget_exhausted;
  OpId next_op_ = 1;
  Time tick_ = 1;
  std::uint64_t steps_ = 0;
};

}  // namespace

RunResult run(const SimConfig& config, const ProgramFactory& programs, Adversary& adversary) {
  Simulator sim(config, programs);
  sim.drive(adversary);
  return std::move(sim).take_result();
}

RunResult replay(const History& recorded, const SimConfig& config, const ProgramFactory& programs,
                 Adversary& adversary) {
  RunResult fresh = run(config, programs, adversary);
  const auto& a = recorded.events;
  const auto& b = fresh.history.events;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (!(a[i].kind == b[i].kind && a[i].op == b[i].op && a[i].proc == b[i].proc &&
          a[i].reg == b[i].reg && a[i].op_kind == b[i].op_kind && a[i].value == b[i].value &&
          a[i].time == b[i].time))
      throw ReplayFault(i, "event mismatch (op " + std::to_string(a[i].op) + " vs " +
                               std::to_string(b[i].op) + ")");
  }
  if (a.size() != b.size())
    throw ReplayFault(std::min(a.size(), b.size()), "history lengths differ");
  if (recorded.cell_writes.size() != fresh.history.cell_writes.size())
    throw ReplayFault(a.size(), "cell-write counts differ");
  for (std::size_t i = 0; i < recorded.cell_writes.size(); ++i) {
    const CellWrite& x = recorded.cell_writes[i];
    const CellWrite& y = fresh.history.cell_writes[i];
    if (!(x.time == y.time && x.op == y.op && x.proc == y.proc && x.cell == y.cell &&
          x.stored == y.stored && x.new_ts == y.new_ts))
      throw ReplayFault(i, "cell-write mismatch at index " + std::to_string(i));
  }
  return fresh;
}

std::optional<Decision> RandomAdversary::next(const AdversaryView& view) {
  std::vector<Proc> eligible;
  for (Proc p = 0; p < view.procs->size(); ++p) {
    const ProcView& pv = (*view.procs)[p];
    if (pv.status == ProcStatus::returned) continue;
    if (pv.status == ProcStatus::blocked) {
      const PendingOp& op = view.pending->at(pv.pending_op);
      if (!view.registers->at(op.reg).multistep()) continue;
    }
    eligible.push_back(p);
  }
  if (eligible.empty()) return std::nullopt;
  return Decision::advance(eligible[rng_.below(eligible.size())]);
}

}  // namespace linlab
