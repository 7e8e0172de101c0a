#pragma once

#include "linlab/sim.hpp"

namespace linlab {

// Random multi-writer workload over one implemented register "R": up to
// total_ops reads/writes spread over the processes, interleaved by the
// random scheduler, possibly cut short so some operations stay pending.
// Write values are distinct small integers.
struct MwmrWorkloadConfig {
  BackendKind backend = BackendKind::alg_vector;
  std::uint32_t procs = 3;
  std::uint32_t total_ops = 8;
  std::uint64_t seed = 0;
};

RunResult run_random_mwmr(const MwmrWorkloadConfig& cfg);

// Random single-writer history over register "R": process 0 writes, the
// others read. Built directly against a sequential register by picking a
// linearization point inside every operation interval, so the history is
// well formed and linearizable by construction, with real concurrency and a
// possibly pending tail. Write values are distinct, which keeps
// which-write-was-read unambiguous.
History random_swmr_history(std::uint32_t readers, std::uint32_t total_ops, std::uint64_t seed);

}  // namespace linlab
