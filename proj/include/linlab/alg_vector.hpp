#pragma once

#include <map>
#include <vector>

#include "linlab/registers.hpp"

namespace linlab {

// Multi-writer register built from n single-writer cells, one per process.
// A writer fills in a fresh vector timestamp one entry at a time (own entry
// incremented, others copied), stores (value, timestamp) in its own cell and
// then resets its local timestamp to all-infinity; a reader collects every
// cell and returns the pair with the lexicographically greatest timestamp.
// Every cell access is one simulator substep. Each store is recorded as a
// CellWrite carrying the local timestamps of all writes active at that
// moment, which is what the online write linearization consumes.
class VectorBackend final : public RegisterBackend {
 public:
  VectorBackend(RegisterSpec spec, std::uint32_t n);

  bool multistep() const override { return true; }
  std::optional<Value> substep(Proc proc, Time now, History& aux) override;

  const std::vector<VectorCell>& cells() const { return cells_; }
  const VectorTs& local_ts(Proc proc) const;

 protected:
  std::optional<Value> on_invoke(const PendingOp& op) override;

 private:
  struct Progress {
    PendingOp op;
    std::uint32_t step = 0;
    std::vector<VectorCell> collected;  // reads only
  };

  std::uint32_t n_;
  std::vector<VectorCell> cells_;
  std::vector<VectorTs> new_ts_;  // per process; all-infinity between writes
  std::map<Proc, Progress> active_;
};

}  // namespace linlab
