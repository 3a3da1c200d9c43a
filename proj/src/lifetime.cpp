#include "pms/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pms/errors.hpp"

namespace pms {

namespace {

// Cumulative hazard of a mission-wide CDF at time t.
double global_cum_hazard(const LifetimeModel& lm, double t) {
  switch (lm.kind) {
    case LifetimeModel::Kind::GlobalExponential:
      return lm.rate * t;
    case LifetimeModel::Kind::GlobalWeibull:
      return t <= 0 ? 0.0 : std::pow(t / lm.scale, lm.shape);
    default:
      return 0.0;
  }
}

void check_phase(int phase, const std::vector<double>& boundaries, double t) {
  int n = static_cast<int>(boundaries.size()) - 1;
  if (phase < 1 || phase > n) {
    std::ostringstream m;
    m << "phase " << phase << " outside 1.." << n;
    throw OutOfMissionError(m.str());
  }
  if (t < boundaries[phase - 1]) {
    std::ostringstream m;
    m << "t = " << t << " precedes the start of phase " << phase;
    throw OutOfMissionError(m.str());
  }
}

}  // namespace

double hazard_increment(const LifetimeModel& lm, int phase,
                        const std::vector<double>& boundaries, double t) {
  check_phase(phase, boundaries, t);
  const double start = boundaries[phase - 1];
  const double stop = std::min(t, boundaries[phase]);  // the min{t, tau_{i+1}} clamp
  const double local = stop - start;
  switch (lm.kind) {
    case LifetimeModel::Kind::GlobalExponential:
      return lm.rate * local;
    case LifetimeModel::Kind::GlobalWeibull: {
      double h0 = global_cum_hazard(lm, start);
      if (!std::isfinite(h0) || std::exp(-h0) == 0.0) {
        std::ostringstream m;
        m << "type already failed with certainty by tau_" << phase << " = " << start;
        throw UndefinedConditionalError(m.str());
      }
      return global_cum_hazard(lm, stop) - h0;
    }
    case LifetimeModel::Kind::PhaseConditional: {
      const auto& law = lm.phase_laws.at(phase - 1);
      if (law.dist == LifetimeModel::PhaseLaw::Dist::Exponential) return law.rate * local;
      return local <= 0 ? 0.0 : std::pow(local / law.scale, law.shape);
    }
    case LifetimeModel::Kind::PhaseHazard:
      return lm.phase_rates.at(phase - 1) * local;
  }
  return 0.0;
}

double conditional_cdf(const LifetimeModel& lm, int phase,
                       const std::vector<double>& boundaries, double t) {
  return -std::expm1(-hazard_increment(lm, phase, boundaries, t));
}

double phase_reliability(const LifetimeModel& lm, int phase,
                         const std::vector<double>& boundaries, double t) {
  return std::exp(-hazard_increment(lm, phase, boundaries, t));
}

double sample_lifetime(const LifetimeModel& lm, const std::vector<double>& boundaries,
                       const std::vector<int>& presence, RngStream& rng) {
  for (int phase : presence) {
    const double start = boundaries[phase - 1];
    const double end = boundaries[phase];
    const double full = hazard_increment(lm, phase, boundaries, end);
    const double u = rng.next_double();
    // survives the phase iff u < exp(-full); otherwise invert the
    // conditional survival S(t) = exp(-(H(t) - H(start))) at u
    if (u < std::exp(-full)) continue;
    const double target = -std::log(u);  // hazard accumulated at death, in (0, full]
    switch (lm.kind) {
      case LifetimeModel::Kind::GlobalExponential:
        return start + target / lm.rate;
      case LifetimeModel::Kind::GlobalWeibull: {
        double h = global_cum_hazard(lm, start) + target;
        return lm.scale * std::pow(h, 1.0 / lm.shape);
      }
      case LifetimeModel::Kind::PhaseConditional: {
        const auto& law = lm.phase_laws.at(phase - 1);
        if (law.dist == LifetimeModel::PhaseLaw::Dist::Exponential)
          return start + target / law.rate;
        return start + law.scale * std::pow(target, 1.0 / law.shape);
      }
      case LifetimeModel::Kind::PhaseHazard:
        return start + target / lm.phase_rates.at(phase - 1);
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace pms
