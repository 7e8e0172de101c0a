#include "linlab/alg_lamport.hpp"

#include "linlab/fault.hpp"

namespace linlab {

LamportBackend::LamportBackend(RegisterSpec spec, std::uint32_t n)
    : RegisterBackend(std::move(spec)), n_(n) {
  if (n_ == 0) throw ConfigError("lamport register needs at least one process");
  Plain init = unwrap(this->spec().initial);
  cells_.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i)
    cells_.push_back(LamportCell{init, LamportTs{0, i + 1}});
}

std::optional<Value> LamportBackend::on_invoke(const PendingOp& op) {
  if (op.proc >= n_)
    throw ConfigError("process " + std::to_string(op.proc) + " outside register " + spec().name);
  Progress p;
  p.op = op;
  auto [it, inserted] = active_.emplace(op.proc, std::move(p));
  (void)it;
  if (!inserted) throw std::logic_error("overlapping ops of one process on " + spec().name);
  return std::nullopt;
}

std::optional<Value> LamportBackend::substep(Proc proc, Time now, History& aux) {
  auto it = active_.find(proc);
  if (it == active_.end()) throw std::logic_error("substep with no in-progress op");
  Progress& p = it->second;

  if (p.step < n_) {
    p.collected.push_back(cells_[p.step]);
    ++p.step;
    return std::nullopt;
  }

  if (p.op.kind == OpKind::write) {
    std::uint64_t max_sq = 0;
    for (const LamportCell& c : p.collected) max_sq = std::max(max_sq, c.ts.sq);
    cells_[proc] = LamportCell{unwrap(p.op.arg), LamportTs{max_sq + 1, proc + 1}};
    CellWrite rec;
    rec.time = now;
    rec.op = p.op.op;
    rec.proc = proc;
    rec.cell = static_cast<int>(proc) + 1;
    rec.stored = Value(cells_[proc]);
    aux.cell_writes.push_back(std::move(rec));
    active_.erase(it);
    return Value(Bot{});
  }

  LamportCell best = p.collected[0];
  for (std::uint32_t i = 1; i < n_; ++i)
    if (best.ts < p.collected[i].ts) best = p.collected[i];
  active_.erase(it);
  return Value(best);
}

}  // namespace linlab
