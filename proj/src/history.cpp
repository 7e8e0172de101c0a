#include "linlab/history.hpp"

#include <algorithm>
#include <set>

#include "linlab/fault.hpp"

namespace linlab {

OpTable op_table(const History& h) {
  OpTable table;
  for (const Event& e : h.events) {
    if (e.kind == EventKind::invoke) {
      OperationRecord rec;
      rec.op = e.op;
      rec.proc = e.proc;
      rec.reg = e.reg;
      rec.kind = e.op_kind;
      rec.argument = e.op_kind == OpKind::write ? e.value : Value(Bot{});
      rec.invoke_time = e.time;
      auto [it, inserted] = table.emplace(e.op, std::move(rec));
      if (!inserted) throw TraceError("duplicate invoke for op " + std::to_string(e.op));
      (void)it;
    } else {
      auto it = table.find(e.op);
      if (it == table.end())
        throw TraceError("respond without invoke for op " + std::to_string(e.op));
      if (it->second.respond_time)
        throw TraceError("duplicate respond for op " + std::to_string(e.op));
      it->second.respond_time = e.time;
      it->second.result = e.value;
    }
  }
  return table;
}

bool precedes(const OperationRecord& a, const OperationRecord& b) {
  return a.respond_time && *a.respond_time < b.invoke_time;
}

History history_prefix(const History& h, Time upto_time) {
  History g;
  for (const Event& e : h.events)
    if (e.time <= upto_time) g.events.push_back(e);
  for (const CellWrite& c : h.cell_writes)
    if (c.time <= upto_time) g.cell_writes.push_back(c);
  return g;
}

History project(const History& h, const std::string& reg) {
  History g;
  std::set<OpId> ops;
  for (const Event& e : h.events)
    if (e.reg == reg) {
      g.events.push_back(e);
      ops.insert(e.op);
    }
  for (const CellWrite& c : h.cell_writes)
    if (ops.count(c.op)) g.cell_writes.push_back(c);
  return g;
}

bool is_event_prefix(const History& g, const History& h) {
  if (g.events.size() > h.events.size()) return false;
  if (g.cell_writes.size() > h.cell_writes.size()) return false;
  if (!std::equal(g.events.begin(), g.events.end(), h.events.begin())) return false;
  return std::equal(g.cell_writes.begin(), g.cell_writes.end(), h.cell_writes.begin());
}

void validate_history(const History& h) {
  Time last_time = 0;
  bool first = true;
  std::map<Proc, std::optional<OpId>> pending_of;  // per-process open operation
  std::map<OpId, Proc> invoked;
  for (const Event& e : h.events) {
    if (!first && e.time <= last_time)
      throw TraceError("event times not strictly increasing at op " + std::to_string(e.op));
    first = false;
    last_time = e.time;
    auto& open = pending_of[e.proc];
    if (e.kind == EventKind::invoke) {
      if (open)
        throw TraceError("process " + std::to_string(e.proc) + " invokes op " +
                         std::to_string(e.op) + " while op " + std::to_string(*open) +
                         " is pending");
      if (invoked.count(e.op)) throw TraceError("op id reused: " + std::to_string(e.op));
      invoked[e.op] = e.proc;
      open = e.op;
    } else {
      if (!open || *open != e.op)
        throw TraceError("respond for op " + std::to_string(e.op) +
                         " does not match the process's pending op");
      open.reset();
    }
  }
  op_table(h);  // re-checks invoke/respond pairing
}

std::vector<OpId> write_sequence(const Linearization& lin, const OpTable& ops) {
  std::vector<OpId> ws;
  for (OpId id : lin.ops) {
    auto it = ops.find(id);
    if (it == ops.end()) throw TraceError("linearization names unknown op " + std::to_string(id));
    if (it->second.kind == OpKind::write) ws.push_back(id);
  }
  return ws;
}

bool is_id_prefix(const std::vector<OpId>& a, const std::vector<OpId>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace linlab
