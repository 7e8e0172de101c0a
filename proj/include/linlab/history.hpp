#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linlab/value.hpp"

namespace linlab {

using Proc = std::uint32_t;
using OpId = std::uint64_t;
using Time = std::uint64_t;

enum class EventKind { invoke, respond };
enum class OpKind { read, write };

// One timed invocation or response record. Times are global event indices
// assigned by the simulator; they strictly increase along a history.
struct Event {
  EventKind kind = EventKind::invoke;
  OpId op = 0;
  Proc proc = 0;
  std::string reg;
  OpKind op_kind = OpKind::read;
  Value value;  // write argument on invoke, return value on respond
  Time time = 0;

  friend bool operator==(const Event& a, const Event& b) {
    return a.kind == b.kind && a.op == b.op && a.proc == b.proc && a.reg == b.reg &&
           a.op_kind == b.op_kind && a.value == b.value && a.time == b.time;
  }
};

// Auxiliary record of one base write to a cell of an implemented register:
// when it happened, which operation did it, and (for the vector-timestamp
// register) the in-progress timestamps of every write active at that moment.
struct CellWrite {
  Time time = 0;
  OpId op = 0;
  Proc proc = 0;
  int cell = 0;   // 1-based cell index
  Value stored;   // the (value, timestamp) pair written
  std::map<Proc, VectorTs> new_ts;  // per active writer, its local timestamp at `time`

  friend bool operator==(const CellWrite& a, const CellWrite& b) {
    return a.time == b.time && a.op == b.op && a.proc == b.proc && a.cell == b.cell &&
           a.stored == b.stored && a.new_ts == b.new_ts;
  }
};

struct History {
  std::vector<Event> events;
  std::vector<CellWrite> cell_writes;
};

// Operation-level view of a history, derived from its events.
struct OperationRecord {
  OpId op = 0;
  Proc proc = 0;
  std::string reg;
  OpKind kind = OpKind::read;
  Value argument;  // write argument (Bot for reads)
  Value result;    // respond value (meaningful only when complete)
  Time invoke_time = 0;
  std::optional<Time> respond_time;

  bool complete() const { return respond_time.has_value(); }
};

using OpTable = std::map<OpId, OperationRecord>;

OpTable op_table(const History& h);

// True iff a completed before b was invoked.
bool precedes(const OperationRecord& a, const OperationRecord& b);

// The subsequence of events (and cell writes) with time <= upto_time. An
// operation cut mid-interval becomes pending in the prefix.
History history_prefix(const History& h, Time upto_time);

// Events of one register only, cell writes belonging to that register's ops.
History project(const History& h, const std::string& reg);

// True iff g is h cut at some earlier time: g's events and cell writes are
// both leading subsequences of h's.
bool is_event_prefix(const History& g, const History& h);

// Structural checks: respond follows a matching invoke, times strictly
// increase, per-process operations do not overlap. Throws TraceError.
void validate_history(const History& h);

// An ordered claim of which operations explain a history.
struct Linearization {
  std::vector<OpId> ops;

  friend bool operator==(const Linearization& a, const Linearization& b) {
    return a.ops == b.ops;
  }
};

// Subsequence of write-operation ids in lin, in order.
std::vector<OpId> write_sequence(const Linearization& lin, const OpTable& ops);

bool is_id_prefix(const std::vector<OpId>& a, const std::vector<OpId>& b);

}  // namespace linlab
