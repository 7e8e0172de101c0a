#include "linlab/experiment.hpp"

#include <cmath>
#include <ostream>

namespace linlab {

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport report;
  double sum = 0.0;
  double sum_sq = 0.0;

  for (std::uint32_t t = 0; t < cfg.trials; ++t) {
    game::GameConfig g = cfg.game;
    g.seed = cfg.game.seed + t;
    game::GameRunResult r = game::run_game(g);

    TrialRow row;
    row.seed = g.seed;
    row.steps = r.run.steps;
    if (r.run.outcome == Outcome::all_returned) {
      row.termination_round = static_cast<std::int64_t>(r.termination_round);
      ++report.terminated;
      sum += double(r.termination_round);
      sum_sq += double(r.termination_round) * double(r.termination_round);
      for (std::uint64_t round = 1; round <= r.termination_round; ++round) {
        RoundStat& s = report.rounds[round];
        ++s.reached;
        if (round < r.termination_round) ++s.continued;
      }
    } else {
      ++report.budget_exhausted;
      for (std::uint64_t round = 1; round <= r.termination_round; ++round) {
        RoundStat& s = report.rounds[round];
        ++s.reached;
        if (round < r.termination_round) ++s.continued;
      }
    }
    report.rows.push_back(row);
  }

  if (report.terminated > 0) {
    double n = double(report.terminated);
    report.mean_round = sum / n;
    double var = n > 1 ? (sum_sq - sum * sum / n) / (n - 1) : 0.0;
    report.ci95_half = 1.96 * std::sqrt(std::max(0.0, var) / n);
  }
  return report;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << "seed,termination_round,steps\n";
  for (const TrialRow& row : report.rows)
    out << row.seed << ',' << row.termination_round << ',' << row.steps << '\n';
}

void print_report(const ExperimentReport& report, std::ostream& out) {
  out << "trials: " << report.rows.size() << "\n";
  out << "terminated: " << report.terminated << "\n";
  out << "budget_exhausted: " << report.budget_exhausted << "\n";
  if (report.terminated > 0) {
    out << "mean_termination_round: " << report.mean_round << "\n";
    out << "ci95_half_width: " << report.ci95_half << "\n";
  }
  for (const auto& [round, stat] : report.rounds) {
    out << "round " << round << ": reached " << stat.reached << ", continued " << stat.continued
        << " (freq " << stat.frequency() << ")\n";
  }
}

}  // namespace linlab
