#include "linlab/workload.hpp"

#include <algorithm>

#include "linlab/fault.hpp"

namespace linlab {

RunResult run_random_mwmr(const MwmrWorkloadConfig& cfg) {
  if (cfg.procs == 0 || cfg.total_ops == 0) throw ConfigError("empty workload");
  Rng rng(cfg.seed ^ 0x3c6ef372fe94f82aULL);

  std::vector<std::vector<Action>> scripts(cfg.procs);
  std::int64_t next_value = 1;
  for (std::uint32_t i = 0; i < cfg.total_ops; ++i) {
    Proc p = static_cast<Proc>(rng.below(cfg.procs));
    if (rng.chance(0.55))
      scripts[p].push_back(Action::write("R", Value(next_value++)));
    else
      scripts[p].push_back(Action::read("R"));
  }

  SimConfig sim;
  sim.n = cfg.procs;
  sim.registers = {RegisterSpec{"R", cfg.backend, Value(std::int64_t{0}), std::nullopt}};
  sim.seed = cfg.seed;
  // sometimes cut the run short so a tail of operations stays pending
  std::uint64_t full = static_cast<std::uint64_t>(cfg.total_ops) * (cfg.procs + 4) + cfg.procs + 8;
  sim.max_steps = rng.chance(0.3) ? 4 + rng.below(full) : full;

  RandomAdversary adversary(cfg.seed);
  auto factory = [&](Proc p) -> std::unique_ptr<Program> {
    return std::make_unique<ScriptProgram>(scripts[p]);
  };
  return run(sim, factory, adversary);
}

History random_swmr_history(std::uint32_t readers, std::uint32_t total_ops, std::uint64_t seed) {
  Rng rng(seed ^ 0xbb67ae8584caa73bULL);
  const std::uint32_t procs = readers + 1;

  struct Open {
    OpId op = 0;
    OpKind kind = OpKind::read;
    Value payload;      // write argument / captured read result
    bool linearized = false;
  };

  History h;
  std::vector<std::optional<Open>> open(procs);
  Value current{std::int64_t{0}};
  Time tick = 1;
  OpId next_op = 1;
  std::int64_t next_value = 1;
  std::uint32_t started = 0;

  auto invoke = [&](Proc p) {
    Open o;
    o.op = next_op++;
    o.kind = p == 0 ? (rng.chance(0.85) ? OpKind::write : OpKind::read) : OpKind::read;
    if (o.kind == OpKind::write) o.payload = Value(next_value++);
    h.events.push_back(Event{EventKind::invoke, o.op, p, "R", o.kind,
                             o.kind == OpKind::write ? o.payload : Value(Bot{}), tick++});
    open[p] = o;
    ++started;
  };
  auto linearize = [&](Proc p) {
    Open& o = *open[p];
    if (o.kind == OpKind::write)
      current = o.payload;
    else
      o.payload = current;
    o.linearized = true;
  };
  auto respond = [&](Proc p) {
    Open& o = *open[p];
    h.events.push_back(Event{EventKind::respond, o.op, p, "R", o.kind,
                             o.kind == OpKind::read ? o.payload : Value(Bot{}), tick++});
    open[p].reset();
  };

  while (true) {
    std::vector<std::pair<int, Proc>> moves;  // 0 invoke, 1 linearize, 2 respond
    for (Proc p = 0; p < procs; ++p) {
      if (!open[p]) {
        if (started < total_ops) moves.emplace_back(0, p);
      } else if (!open[p]->linearized) {
        moves.emplace_back(1, p);
      } else {
        moves.emplace_back(2, p);
      }
    }
    if (moves.empty()) break;
    // once all ops have started, sometimes stop and leave the rest pending
    if (started == total_ops && rng.chance(0.08)) break;
    auto [what, p] = moves[rng.below(moves.size())];
    if (what == 0)
      invoke(p);
    else if (what == 1)
      linearize(p);
    else
      respond(p);
  }
  validate_history(h);
  return h;
}

}  // namespace linlab
