#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "linlab/history.hpp"
#include "linlab/registers.hpp"

namespace linlab {

// Self-describing header carried as the first line of a trace file.
struct TraceMeta {
  std::string trace;  // "game" | "mwmr" | "swmr"
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  std::string adversary;  // game traces
  bool bounded = false;
  std::uint64_t rounds = 0;
  std::vector<RegisterSpec> registers;
};

struct TraceFile {
  TraceMeta meta;
  History history;
};

// JSONL: one meta line, then one line per event or cell write, merged in
// time order. Bottom encodes as null, infinity as the string "inf".
void write_trace(const TraceFile& t, std::ostream& out);
std::string trace_to_string(const TraceFile& t);
TraceFile read_trace(std::istream& in);
TraceFile read_trace_file(const std::string& path);
void write_trace_file(const TraceFile& t, const std::string& path);

// Linearization files: one op id per line.
void write_linearization(const Linearization& lin, std::ostream& out);
std::string linearization_to_string(const Linearization& lin);
Linearization read_linearization(std::istream& in);
Linearization read_linearization_file(const std::string& path);

// Initial register content for checkers, derived from the trace header:
// implemented back-ends wrap their scalar initial in the zero-timestamp pair.
Value checker_initial(const TraceMeta& meta, const std::string& reg);

}  // namespace linlab
