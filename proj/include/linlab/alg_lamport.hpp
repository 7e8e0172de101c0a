#pragma once

#include <map>
#include <vector>

#include "linlab/registers.hpp"

namespace linlab {

// Multi-writer register from single-writer cells using Lamport clocks: a
// writer collects every cell, takes the maximum sequence number plus one,
// and stores (value, <sq, own id>) in its own cell; a reader returns the
// cell pair with the lexicographically greatest <sq, id>. Linearizable, and
// the standard counterexample scripts below show it is not write
// strongly-linearizable. Cell ids are 1-based, so cell i starts as
// (initial, <0, i+1>) for process i.
class LamportBackend final : public RegisterBackend {
 public:
  LamportBackend(RegisterSpec spec, std::uint32_t n);

  bool multistep() const override { return true; }
  std::optional<Value> substep(Proc proc, Time now, History& aux) override;

  const std::vector<LamportCell>& cells() const { return cells_; }

 protected:
  std::optional<Value> on_invoke(const PendingOp& op) override;

 private:
  struct Progress {
    PendingOp op;
    std::uint32_t step = 0;
    std::vector<LamportCell> collected;
  };

  std::uint32_t n_;
  std::vector<LamportCell> cells_;
  std::map<Proc, Progress> active_;
};

}  // namespace linlab
