#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linlab/history.hpp"
#include "linlab/value.hpp"

namespace linlab {

enum class BackendKind { atomic, lin_adv, wsl_adv, alg_vector, alg_lamport };

std::string backend_name(BackendKind k);
std::optional<BackendKind> backend_from_name(const std::string& name);

struct RegisterSpec {
  std::string name;
  BackendKind backend = BackendKind::atomic;
  Value initial;                   // Bot unless configured otherwise
  std::optional<Proc> swmr_writer; // set for single-writer registers
};

struct PendingOp {
  OpId op = 0;
  Proc proc = 0;
  std::string reg;
  OpKind kind = OpKind::read;
  Value arg;
  Time invoke_time = 0;
};

// One register instance inside a simulation. Atomic back-ends complete on
// invoke; adversarial back-ends complete when the adversary responds them;
// implemented back-ends (vector / Lamport) complete after internal substeps.
class RegisterBackend {
 public:
  explicit RegisterBackend(RegisterSpec spec) : spec_(std::move(spec)) {}
  virtual ~RegisterBackend() = default;

  const RegisterSpec& spec() const { return spec_; }

  // Registers the op. Returns the response value if the op completes in the
  // same step (atomic), nullopt if it stays pending. Enforces the
  // single-writer rule when the register declares a writer.
  std::optional<Value> invoke(const PendingOp& op);

  // True if pending ops of this register advance by internal substeps.
  virtual bool multistep() const { return false; }

  // One internal base step of the given process's pending op; returns the
  // response value once the op completes. `aux` receives cell-write records.
  virtual std::optional<Value> substep(Proc proc, Time now, History& aux);

 protected:
  virtual std::optional<Value> on_invoke(const PendingOp& op) = 0;

 private:
  RegisterSpec spec_;
};

class AtomicBackend final : public RegisterBackend {
 public:
  explicit AtomicBackend(RegisterSpec spec)
      : RegisterBackend(std::move(spec)), current_(this->spec().initial) {}

  const Value& current() const { return current_; }

 protected:
  std::optional<Value> on_invoke(const PendingOp& op) override;

 private:
  Value current_;
};

// Adversary-controlled register. The adversary builds an explicit
// linearization order online: writes are appended to an order log
// (linearize-commit decisions) and reads are anchored after a chosen write
// (choose-read-value decisions). The monitor rejects any placement or
// response that could not be part of a linearization of the projected
// history:
//   - placements must respect real-time precedence against everything
//     already placed (checked in both directions),
//   - a read's value is forced by its anchor,
//   - reads respond only once anchored,
//   - under the write-strong variant, a write responds only once placed,
//     so the committed write order is fixed no later than each write's
//     response; the order log is append-only by construction.
// Under the plain linearizable variant a write may respond before it is
// placed; that retroactive slack is exactly what distinguishes the two.
class AdversarialBackend final : public RegisterBackend {
 public:
  AdversarialBackend(RegisterSpec spec, bool write_strong);

  bool write_strong() const { return write_strong_; }

  // linearize-commit: appends writes, in order, to the placement log.
  void commit_writes(const std::vector<OpId>& ops);

  // choose-read-value: anchors the pending read after the latest placed
  // write holding `v` (or before all writes when `v` is the initial value
  // and no placed write holds it).
  void choose_read_value(OpId op, const Value& v);

  // Delivers the response for a pending op; throws MonitorViolation when the
  // op may not respond yet. `now` is the respond event's time.
  Value respond(OpId op, Time now);

  // Checks that every responded op has been placed, i.e. the placement log
  // is a complete linearization witness for the projected history.
  void finalize() const;

  // The committed write order (ids, in order).
  std::vector<OpId> write_log() const;

  // Full placement order, reads included: a linearization of the projected
  // history so far.
  std::vector<OpId> placement_order() const;

  bool responded(OpId op) const;
  bool placed(OpId op) const;

 protected:
  std::optional<Value> on_invoke(const PendingOp& op) override;

 private:
  struct PlacedOp {
    OpId op = 0;
    OpKind kind = OpKind::read;
    Value value;  // written value for writes, forced value for reads
  };
  struct WriteNode {
    PlacedOp write;
    std::vector<PlacedOp> reads;
  };
  struct OpState {
    PendingOp info;
    bool placed = false;
    std::optional<Time> respond_time;
    std::optional<Value> read_value;  // set when a read is anchored
  };

  // Precedence screen for inserting `op` at placement position `pos`
  // (counted over the flattened placement order).
  void check_insert(const OpState& op, std::size_t pos) const;
  std::vector<const OpState*> flatten() const;
  const OpState& state_of(OpId op) const;
  OpState& state_of(OpId op);

  bool write_strong_;
  std::map<OpId, OpState> ops_;
  std::vector<PlacedOp> initial_reads_;
  std::vector<WriteNode> nodes_;
};

// Name -> backend instance for one simulation.
class RegisterBank {
 public:
  explicit RegisterBank(const std::vector<RegisterSpec>& specs, std::uint32_t n);

  RegisterBackend& at(const std::string& name);
  const RegisterBackend& at(const std::string& name) const;
  AdversarialBackend& adversarial(const std::string& name);
  bool has(const std::string& name) const;

  // Runs the placement-completeness check on every adversarial register.
  void finalize_monitors() const;

  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::unique_ptr<RegisterBackend>> regs_;
};

}  // namespace linlab
