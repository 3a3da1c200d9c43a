#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "pms/lifetime.hpp"
#include "pms/model.hpp"
#include "pms/reliability.hpp"

namespace pms {

/// One simulated mission: per-component failure times and the first instant
/// the running phase structure evaluates to 0 (+inf = mission success).
struct MissionDraw {
  std::vector<double> failure_times;
  double mission_failure_time = std::numeric_limits<double>::infinity();

  bool success() const {
    return mission_failure_time == std::numeric_limits<double>::infinity();
  }
};

/// Monte Carlo estimate at one evaluation point with a 99% Wilson interval.
struct SimResult {
  EvalPoint point;
  std::uint64_t survived = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double half_width = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;

  bool contains(double analytic) const { return ci_lo <= analytic && analytic <= ci_hi; }
};

/// Failure instant of a non-repairable mission given fixed component failure
/// times: checked at each phase start and at every in-phase failure instant;
/// between those events the state cannot change.
double mission_failure_time(const PhasedSystem& sys, const std::vector<double>& failure_times);

/// Draws one mission with a caller-owned stream.
MissionDraw simulate_mission(const PhasedSystem& sys, RngStream& rng);

/**
 * Empirical survival at each point with common random numbers: every
 * trajectory is drawn once and evaluated at all points, so the estimated
 * curve is monotone pathwise.  Reproducible for a fixed (seed, trials) pair
 * regardless of the thread count.
 */
std::vector<SimResult> estimate_curve(const PhasedSystem& sys,
                                      const std::vector<EvalPoint>& points,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int threads = 1);

/// CSV: t, side, estimate, half_width, survived, trials.
void write_sim_csv(const std::vector<SimResult>& results, std::ostream& os);

}  // namespace pms
