#include "linlab/alg_vector.hpp"

#include "linlab/fault.hpp"

namespace linlab {

VectorBackend::VectorBackend(RegisterSpec spec, std::uint32_t n)
    : RegisterBackend(std::move(spec)), n_(n) {
  if (n_ == 0) throw ConfigError("vector register needs at least one process");
  Plain init = unwrap(this->spec().initial);
  cells_.assign(n_, VectorCell{init, vts_zeros(n_)});
  new_ts_.assign(n_, vts_infinities(n_));
}

const VectorTs& VectorBackend::local_ts(Proc proc) const {
  if (proc >= n_) throw ConfigError("process index out of range");
  return new_ts_[proc];
}

std::optional<Value> VectorBackend::on_invoke(const PendingOp& op) {
  if (op.proc >= n_)
    throw ConfigError("process " + std::to_string(op.proc) + " outside register " + spec().name);
  Progress p;
  p.op = op;
  auto [it, inserted] = active_.emplace(op.proc, std::move(p));
  (void)it;
  if (!inserted) throw std::logic_error("overlapping ops of one process on " + spec().name);
  return std::nullopt;
}

std::optional<Value> VectorBackend::substep(Proc proc, Time now, History& aux) {
  auto it = active_.find(proc);
  if (it == active_.end()) throw std::logic_error("substep with no in-progress op");
  Progress& p = it->second;

  if (p.op.kind == OpKind::write) {
    if (p.step < n_) {
      std::uint32_t i = p.step;
      std::uint64_t base = cells_[i].ts[i].n;
      new_ts_[proc][i] = TsEntry::fin(i == proc ? base + 1 : base);
      ++p.step;
      return std::nullopt;
    }
    if (p.step == n_) {
      cells_[proc] = VectorCell{unwrap(p.op.arg), new_ts_[proc]};
      CellWrite rec;
      rec.time = now;
      rec.op = p.op.op;
      rec.proc = proc;
      rec.cell = static_cast<int>(proc) + 1;
      rec.stored = Value(cells_[proc]);
      for (const auto& [q, prog] : active_)
        if (prog.op.kind == OpKind::write) rec.new_ts[q] = new_ts_[q];
      aux.cell_writes.push_back(std::move(rec));
      ++p.step;
      return std::nullopt;
    }
    // reset step, then the operation returns
    new_ts_[proc] = vts_infinities(n_);
    active_.erase(it);
    return Value(Bot{});
  }

  if (p.step < n_) {
    p.collected.push_back(cells_[p.step]);
    ++p.step;
    return std::nullopt;
  }
  VectorCell best = p.collected[0];
  for (std::uint32_t i = 1; i < n_; ++i)
    if (vts_compare(p.collected[i].ts, best.ts) == Ord::GT) best = p.collected[i];
  active_.erase(it);
  return Value(best);
}

}  // namespace linlab
