#pragma once

#include <cstdint>
#include <vector>

#include "pms/model.hpp"

namespace pms {

/**
 * Cumulative-hazard increment of the conditional law of phase i between the
 * phase start tau_i and min(t, tau_{i+1}).  All conditional quantities are
 * derived from it:
 *   F_i(t) = 1 - exp(-increment),   R_i(t) = exp(-increment).
 * Working on the hazard scale keeps tiny failure probabilities exact to
 * machine precision (no 1 - (1 - eps) cancellation).
 *
 * `boundaries` is tau_1..tau_{N+1}; phase is 1-based; requires tau_i <= t.
 * Throws UndefinedConditionalError when survival to tau_i has probability 0.
 */
double hazard_increment(const LifetimeModel& lm, int phase,
                        const std::vector<double>& boundaries, double t);

/// Conditional CDF F_i(t) inside phase i, clamped at tau_{i+1}.
double conditional_cdf(const LifetimeModel& lm, int phase,
                       const std::vector<double>& boundaries, double t);

/// Component reliability R_i(t) = 1 - F_i(t) inside phase i.
double phase_reliability(const LifetimeModel& lm, int phase,
                         const std::vector<double>& boundaries, double t);

/// Splittable counter-seeded generator (splitmix64).  One instance per
/// Monte Carlo trial makes runs reproducible under any thread partition.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  /// Stream for a (seed, index) pair; used as one-stream-per-trial.
  static RngStream at(std::uint64_t seed, std::uint64_t index) {
    return RngStream(seed + index * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw strictly inside (0, 1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/**
 * Draws one failure time consistent with the model and the component's
 * presence timeline: sequential inverse-transform conditioning through each
 * present phase; absent phases contribute no failure risk.  Returns +inf
 * when the component outlives every present phase.
 */
double sample_lifetime(const LifetimeModel& lm, const std::vector<double>& boundaries,
                       const std::vector<int>& presence, RngStream& rng);

}  // namespace pms
