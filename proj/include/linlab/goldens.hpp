#pragma once

#include <string>
#include <vector>

#include "linlab/trace_io.hpp"

namespace linlab {

// Scripted three-writer run of the vector register (n=3) in which the write
// finishing first is linearized second: the online write order comes out
// (op 3, op 2, op 1) while the stored timestamps order the same way. A
// trailing read returns the largest pair.
TraceFile scripted_vector_overlap();

struct CounterexampleTriple {
  TraceFile g;        // first writer mid-flight, second writer done
  TraceFile h_case1;  // first writer finishes low; reader sees the second
  TraceFile h_case2;  // a third write boosts the first; reader sees the first
};

// The Lamport-register scripts that defeat every prefix-stable write order
// (n = 3, values 1, 2, 3).
CounterexampleTriple build_counterexample();

// A seeded adversarial game run over lin-adv registers.
TraceFile adversarial_game_trace(std::uint32_t n, std::uint64_t seed, std::uint64_t rounds);

struct GoldenFile {
  std::string name;
  std::string contents;
};

// Every golden artifact, with deterministic bytes.
std::vector<GoldenFile> generate_goldens();

// Compares regenerated goldens against files under dir. Returns a
// human-readable mismatch description per file, empty when identical.
std::vector<std::string> check_goldens_against(const std::string& dir);

void write_goldens_to(const std::string& dir);

}  // namespace linlab
