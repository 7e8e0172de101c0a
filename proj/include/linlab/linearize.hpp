#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linlab/history.hpp"

namespace linlab {

struct CheckResult {
  bool ok = true;
  std::string reason;

  static CheckResult pass() { return CheckResult{}; }
  static CheckResult fail(std::string why) { return CheckResult{false, std::move(why)}; }
};

// op -> the (value, timestamp) pair its base write stored, for histories of
// the implemented registers. Plain histories yield an empty map.
std::map<OpId, Value> cell_value_map(const History& h);

// What a read of this write observes: the stored pair when one exists,
// otherwise the write argument.
Value effective_write_value(const OperationRecord& rec, const std::map<OpId, Value>& cells);

// Verifies that lin explains h: all completed ops present and extras only
// pending in h; real-time precedence respected; every completed read returns
// the last preceding write's value (or the initial value).
CheckResult check_linearization(const History& h, const Linearization& lin, const Value& initial);

// Exhaustive search: ops beyond this bound are refused, never truncated.
inline constexpr std::size_t kOracleMaxOps = 16;

enum class OracleStatus { ok, none, refused };

struct OracleResult {
  OracleStatus status = OracleStatus::none;
  Linearization lin;  // witness when ok
};

// Brute-force linearizability oracle with subset memoization. Searches over
// all completed operations plus any subset of pending writes; pending reads
// never help and are skipped.
OracleResult check_linearizable(const History& h, const Value& initial);

// Every valid linearization (in a fixed deterministic order), or nullopt
// when the instance exceeds the size bound.
std::optional<std::vector<Linearization>> enumerate_linearizations(const History& h,
                                                                   const Value& initial);

// One batch appended to the online write order at a base-write instant.
struct Batch {
  std::size_t index = 0;  // 1-based position among base writes
  Time t = 0;
  OpId leader = 0;                 // the op storing to its cell at t
  std::vector<OpId> candidates;    // active writes not yet ordered
  std::map<OpId, VectorTs> pts;    // their local timestamps at t
  std::vector<OpId> members;       // the batch, in placement order
};

struct VectorLinResult {
  Linearization lin;
  std::vector<OpId> wseq;  // write order only
  std::vector<Batch> batches;
};

// Online write linearization of a vector-register run: scans base writes in
// time order, appends at each one the batch of active writes whose partial
// timestamps do not exceed the storing write's, sorted by timestamp
// (process id breaks the rare equal-partial tie); reads are then anchored
// after the write of the pair they returned, initial-value reads first, each
// group in start-time order. Pure function of the (augmented) trace.
VectorLinResult vector_run_linearization(const History& h);

// Timestamp relations every batch must satisfy; also cross-batch ordering.
CheckResult check_vector_batches(const History& h, const VectorLinResult& r);

// Single-writer histories: drops the final operation of base when it is a
// write still pending in h; otherwise returns base unchanged. Base must be a
// valid linearization (throws ConfigError otherwise).
Linearization drop_trailing_pending_write(const History& h, const Linearization& base,
                                          const Value& initial);

struct PrefixFamilyEntry {
  History h;
  Linearization lin;
};

// For every pair (G, H) in the family with G an event-prefix of H, the write
// sequence of G's linearization must be a prefix of H's. Each entry must
// itself pass check_linearization.
CheckResult check_wsl_prefixes(const std::vector<PrefixFamilyEntry>& family, const Value& initial);

struct RefuteResult {
  bool refuted = false;
  bool refused = false;  // size bound exceeded
  // refuted: every linearization of g paired with the index of an extension
  // none of whose linearizations extends its write sequence
  std::vector<std::pair<Linearization, std::size_t>> witness;
  // not refuted: a linearization of g that survives every extension
  std::optional<Linearization> survivor;
};

// Witness that no prefix-stable assignment of write orders exists: true iff
// every valid linearization of g has some extension in which no valid
// linearization keeps g's write sequence as a prefix.
RefuteResult refute_wsl(const History& g, const std::vector<History>& extensions,
                        const Value& initial);

}  // namespace linlab
