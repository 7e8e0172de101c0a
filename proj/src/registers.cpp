#include "linlab/registers.hpp"

#include <algorithm>

#include "linlab/alg_lamport.hpp"
#include "linlab/alg_vector.hpp"
#include "linlab/fault.hpp"

namespace linlab {

std::string backend_name(BackendKind k) {
  switch (k) {
    case BackendKind::atomic: return "atomic";
    case BackendKind::lin_adv: return "lin-adv";
    case BackendKind::wsl_adv: return "wsl-adv";
    case BackendKind::alg_vector: return "alg2";
    case BackendKind::alg_lamport: return "alg4";
  }
  return "?";
}

std::optional<BackendKind> backend_from_name(const std::string& name) {
  if (name == "atomic") return BackendKind::atomic;
  if (name == "lin-adv") return BackendKind::lin_adv;
  if (name == "wsl-adv") return BackendKind::wsl_adv;
  if (name == "alg2") return BackendKind::alg_vector;
  if (name == "alg4") return BackendKind::alg_lamport;
  return std::nullopt;
}

std::optional<Value> RegisterBackend::invoke(const PendingOp& op) {
  if (spec_.swmr_writer && op.kind == OpKind::write && op.proc != *spec_.swmr_writer)
    throw ConfigError("process " + std::to_string(op.proc) + " is not the writer of SWMR register " +
                      spec_.name);
  return on_invoke(op);
}

std::optional<Value> RegisterBackend::substep(Proc, Time, History&) {
  throw std::logic_error("substep on a single-step register backend");
}

std::optional<Value> AtomicBackend::on_invoke(const PendingOp& op) {
  if (op.kind == OpKind::read) return current_;
  current_ = op.arg;
  return Value(Bot{});
}

AdversarialBackend::AdversarialBackend(RegisterSpec spec, bool write_strong)
    : RegisterBackend(std::move(spec)), write_strong_(write_strong) {}

std::optional<Value> AdversarialBackend::on_invoke(const PendingOp& op) {
  OpState st;
  st.info = op;
  auto [it, inserted] = ops_.emplace(op.op, std::move(st));
  (void)it;
  if (!inserted) throw MonitorViolation("op id reinvoked on " + spec().name);
  return std::nullopt;
}

const AdversarialBackend::OpState& AdversarialBackend::state_of(OpId op) const {
  auto it = ops_.find(op);
  if (it == ops_.end())
    throw MonitorViolation("unknown op " + std::to_string(op) + " on " + spec().name);
  return it->second;
}

AdversarialBackend::OpState& AdversarialBackend::state_of(OpId op) {
  return const_cast<OpState&>(static_cast<const AdversarialBackend*>(this)->state_of(op));
}

std::vector<const AdversarialBackend::OpState*> AdversarialBackend::flatten() const {
  std::vector<const OpState*> order;
  auto add = [&](const PlacedOp& p) { order.push_back(&state_of(p.op)); };
  for (const PlacedOp& r : initial_reads_) add(r);
  for (const WriteNode& node : nodes_) {
    add(node.write);
    for (const PlacedOp& r : node.reads) add(r);
  }
  return order;
}

void AdversarialBackend::check_insert(const OpState& op, std::size_t pos) const {
  auto order = flatten();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const OpState& y = *order[i];
    if (i < pos) {
      // y stays before op: op must not precede y in real time
      if (op.respond_time && *op.respond_time < y.info.invoke_time)
        throw MonitorViolation("placement on " + spec().name + " puts op " +
                               std::to_string(op.info.op) + " after op " +
                               std::to_string(y.info.op) + " which it precedes");
    } else {
      // y stays after op: y must not precede op in real time
      if (y.respond_time && *y.respond_time < op.info.invoke_time)
        throw MonitorViolation("placement on " + spec().name + " puts op " +
                               std::to_string(op.info.op) + " before op " +
                               std::to_string(y.info.op) + " which precedes it");
    }
  }
}

void AdversarialBackend::commit_writes(const std::vector<OpId>& ops) {
  for (OpId id : ops) {
    OpState& st = state_of(id);
    if (st.info.kind != OpKind::write)
      throw MonitorViolation("linearize-commit of non-write op " + std::to_string(id));
    if (st.placed)
      throw MonitorViolation("op " + std::to_string(id) + " already committed on " + spec().name);
    check_insert(st, flatten().size());
    nodes_.push_back(WriteNode{PlacedOp{id, OpKind::write, st.info.arg}, {}});
    st.placed = true;
  }
}

void AdversarialBackend::choose_read_value(OpId op, const Value& v) {
  OpState& st = state_of(op);
  if (st.info.kind != OpKind::read)
    throw MonitorViolation("choose-read-value on write op " + std::to_string(op));
  if (st.placed) throw MonitorViolation("read " + std::to_string(op) + " already anchored");
  if (st.respond_time) throw MonitorViolation("read " + std::to_string(op) + " already responded");

  // Anchor after the latest placed write holding v whose placement passes the
  // precedence screen.
  std::size_t pos = initial_reads_.size();
  std::vector<std::size_t> node_pos(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    node_pos[i] = pos;  // position of the write itself
    pos += 1 + nodes_[i].reads.size();
  }
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (!(nodes_[i].write.value == v)) continue;
    std::size_t insert_at = node_pos[i] + 1 + nodes_[i].reads.size();
    try {
      check_insert(st, insert_at);
    } catch (const MonitorViolation&) {
      continue;
    }
    nodes_[i].reads.push_back(PlacedOp{op, OpKind::read, v});
    st.placed = true;
    st.read_value = v;
    return;
  }
  if (v == spec().initial) {
    check_insert(st, initial_reads_.size());
    initial_reads_.push_back(PlacedOp{op, OpKind::read, v});
    st.placed = true;
    st.read_value = v;
    return;
  }
  throw MonitorViolation("no linearization of " + spec().name + " lets read " + std::to_string(op) +
                         " return " + to_string(v));
}

Value AdversarialBackend::respond(OpId op, Time now) {
  OpState& st = state_of(op);
  if (st.respond_time) throw MonitorViolation("op " + std::to_string(op) + " already responded");
  if (st.info.kind == OpKind::read) {
    if (!st.placed || !st.read_value)
      throw MonitorViolation("read " + std::to_string(op) + " responded before a value was chosen");
    st.respond_time = now;
    return *st.read_value;
  }
  if (write_strong_ && !st.placed)
    throw MonitorViolation("write " + std::to_string(op) + " responded on " + spec().name +
                           " before being committed to the write order");
  st.respond_time = now;
  return Value(Bot{});
}

void AdversarialBackend::finalize() const {
  for (const auto& [id, st] : ops_) {
    if (st.respond_time && !st.placed)
      throw MonitorViolation("completed op " + std::to_string(id) + " on " + spec().name +
                             " was never placed in the linearization order");
  }
}

std::vector<OpId> AdversarialBackend::write_log() const {
  std::vector<OpId> log;
  log.reserve(nodes_.size());
  for (const WriteNode& node : nodes_) log.push_back(node.write.op);
  return log;
}

std::vector<OpId> AdversarialBackend::placement_order() const {
  std::vector<OpId> order;
  for (const PlacedOp& r : initial_reads_) order.push_back(r.op);
  for (const WriteNode& node : nodes_) {
    order.push_back(node.write.op);
    for (const PlacedOp& r : node.reads) order.push_back(r.op);
  }
  return order;
}

bool AdversarialBackend::responded(OpId op) const { return state_of(op).respond_time.has_value(); }

bool AdversarialBackend::placed(OpId op) const { return state_of(op).placed; }

RegisterBank::RegisterBank(const std::vector<RegisterSpec>& specs, std::uint32_t n) {
  for (const RegisterSpec& spec : specs) {
    std::unique_ptr<RegisterBackend> backend;
    switch (spec.backend) {
      case BackendKind::atomic: backend = std::make_unique<AtomicBackend>(spec); break;
      case BackendKind::lin_adv: backend = std::make_unique<AdversarialBackend>(spec, false); break;
      case BackendKind::wsl_adv: backend = std::make_unique<AdversarialBackend>(spec, true); break;
      case BackendKind::alg_vector: backend = std::make_unique<VectorBackend>(spec, n); break;
      case BackendKind::alg_lamport: backend = std::make_unique<LamportBackend>(spec, n); break;
    }
    auto [it, inserted] = regs_.emplace(spec.name, std::move(backend));
    (void)it;
    if (!inserted) throw ConfigError("duplicate register name " + spec.name);
  }
}

RegisterBackend& RegisterBank::at(const std::string& name) {
  auto it = regs_.find(name);
  if (it == regs_.end()) throw ConfigError("unknown register " + name);
  return *it->second;
}

const RegisterBackend& RegisterBank::at(const std::string& name) const {
  auto it = regs_.find(name);
  if (it == regs_.end()) throw ConfigError("unknown register " + name);
  return *it->second;
}

AdversarialBackend& RegisterBank::adversarial(const std::string& name) {
  auto* adv = dynamic_cast<AdversarialBackend*>(&at(name));
  if (!adv) throw ConfigError("register " + name + " has no adversary-controlled back-end");
  return *adv;
}

bool RegisterBank::has(const std::string& name) const { return regs_.count(name) > 0; }

void RegisterBank::finalize_monitors() const {
  for (const auto& [name, backend] : regs_) {
    if (const auto* adv = dynamic_cast<const AdversarialBackend*>(backend.get())) adv->finalize();
  }
}

std::vector<std::string> RegisterBank::names() const {
  std::vector<std::string> out;
  for (const auto& [name, backend] : regs_) out.push_back(name);
  return out;
}

}  // namespace linlab
