#pragma once

#include <ostream>
#include <vector>

#include "pms/model.hpp"
#include "pms/signature.hpp"

namespace pms {

/// Where to evaluate R: at a boundary tau_i the survival function has two
/// one-sided limits, and every paper table reports both.
struct EvalPoint {
  enum class Side { Left, Interior, Right };
  double t = 0.0;
  Side side = Side::Interior;

  static EvalPoint left(double t) { return {t, Side::Left}; }
  static EvalPoint right(double t) { return {t, Side::Right}; }
  static EvalPoint interior(double t) { return {t, Side::Interior}; }
};

const char* side_name(EvalPoint::Side side);

/**
 * Phase map rho(t) = max{ i : tau_i < t } with boundary conventions:
 * t = tau_i with a left limit gives i-1, with a right limit gives i, and an
 * interior query at an inner boundary is rejected so callers stay explicit.
 * rho(0) = 1 by convention (mission start lies in phase 1).
 */
int current_phase(const std::vector<double>& boundaries, const EvalPoint& pt);

struct BoundaryJump {
  int phase = 0;    // boundary tau_phase (2..N)
  double t = 0.0;   // boundary time
  double delta = 0; // R(t-) - R(t+), >= 0 for coherent non-repairable systems
};

/// Sampled survival curve with paired one-sided limits at each boundary.
struct SurvivalCurve {
  std::vector<std::pair<EvalPoint, double>> samples;  // strictly ordered in (t, side)
  std::vector<BoundaryJump> jumps;
};

/**
 * Mission survival R at one point: the signature family contracted against
 * binomial level-count weights, with counts of completed phases frozen at
 * their phase ends.  Products are accumulated with compensated summation
 * since every weight is near the all-working corner.
 */
double system_reliability(const PhasedSystem& sys, const SignatureFamily& fam,
                          const EvalPoint& pt);

/// Samples R over a uniform grid of `grid_points` times plus both one-sided
/// limits at every inner boundary; records the jump sizes.
SurvivalCurve reliability_curve(const PhasedSystem& sys, const SignatureFamily& fam,
                                int grid_points);

/// Curve CSV: t, side, R, jump-at-boundary (blank unless boundary).
/// Values round-trip through 12 significant digits.
void write_curve_csv(const SurvivalCurve& curve, std::ostream& os);

}  // namespace pms
