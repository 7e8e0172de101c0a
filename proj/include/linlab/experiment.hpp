#pragma once

#include <iosfwd>

#include "linlab/game.hpp"

namespace linlab {

struct ExperimentConfig {
  game::GameConfig game;        // seed acts as the base seed
  std::uint32_t trials = 1000;
};

struct TrialRow {
  std::uint64_t seed = 0;
  std::int64_t termination_round = -1;  // -1 when the step budget was hit
  std::uint64_t steps = 0;
};

struct RoundStat {
  std::uint64_t reached = 0;    // trials whose last round is >= this round
  std::uint64_t continued = 0;  // of those, trials that entered the next round
  double frequency() const { return reached ? double(continued) / double(reached) : 0.0; }
};

struct ExperimentReport {
  std::vector<TrialRow> rows;
  std::uint32_t terminated = 0;
  std::uint32_t budget_exhausted = 0;
  double mean_round = 0.0;   // over terminated trials only
  double ci95_half = 0.0;    // normal-approximation half width
  std::map<std::uint64_t, RoundStat> rounds;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// seed,termination_round,steps (termination_round -1 when the budget hit)
void write_csv(const ExperimentReport& report, std::ostream& out);
void print_report(const ExperimentReport& report, std::ostream& out);

}  // namespace linlab
