#include "pms/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pms/errors.hpp"
#include "pms/lifetime.hpp"

namespace pms {

const char* side_name(EvalPoint::Side side) {
  switch (side) {
    case EvalPoint::Side::Left:
      return "left";
    case EvalPoint::Side::Right:
      return "right";
    case EvalPoint::Side::Interior:
      return "interior";
  }
  return "?";
}

int current_phase(const std::vector<double>& boundaries, const EvalPoint& pt) {
  const int n = static_cast<int>(boundaries.size()) - 1;
  const double t = pt.t;
  if (t < 0 || t > boundaries[n]) {
    std::ostringstream m;
    m << "t = " << t << " outside the mission window [0, " << boundaries[n] << "]";
    throw OutOfMissionError(m.str());
  }
  if (t == 0) {
    if (pt.side == EvalPoint::Side::Left)
      throw OutOfMissionError("left limit at mission start is undefined");
    return 1;  // max{i : tau_i < t} is empty at t = 0; mission start lies in phase 1
  }
  if (t == boundaries[n]) {
    if (pt.side == EvalPoint::Side::Right)
      throw OutOfMissionError("right limit at mission end is undefined");
    return n;
  }
  for (int i = 1; i < n; ++i) {
    if (t == boundaries[i]) {
      switch (pt.side) {
        case EvalPoint::Side::Left:
          return i;
        case EvalPoint::Side::Right:
          return i + 1;
        case EvalPoint::Side::Interior:
          std::ostringstream m;
          m << "t = " << t << " is the phase boundary tau_" << i + 1
            << "; query the left or right limit explicitly";
          throw OutOfMissionError(m.str());
      }
    }
  }
  int lo = 0;
  for (int i = 0; i < n; ++i)
    if (boundaries[i] < t) lo = i;
  return lo + 1;
}

double system_reliability(const PhasedSystem& sys, const SignatureFamily& fam,
                          const EvalPoint& pt) {
  const std::vector<double> b = sys.boundaries();
  const int rho = current_phase(b, pt);
  const CountingPlan& plan = fam.plan;
  const int naxes = plan.axis_count(rho);

  // Per-axis conditional survival/failure for this evaluation point.
  // Counts of completed phases are frozen at the phase end.
  std::vector<double> surv(naxes), fail(naxes);
  for (int a = 0; a < naxes; ++a) {
    const LevelAxis& axis = plan.axes[a];
    const MetaType& mt = fam.mta.metatypes[axis.metatype];
    const LifetimeModel& lm = sys.types[mt.physical_type].lifetime;
    double t_eff;
    if (axis.phase < rho)
      t_eff = b[axis.phase];  // completed phase: C_ik(t) = C_ik(tau_{i+1})
    else if (pt.side == EvalPoint::Side::Right)
      t_eff = b[axis.phase - 1];  // just entered: no elapsed exposure
    else
      t_eff = pt.t;
    const double h = hazard_increment(lm, axis.phase, b, t_eff);
    surv[a] = std::exp(-h);
    fail[a] = -std::expm1(-h);
  }

  // Kahan-compensated sum over the sparse table rows.
  double sum = 0.0, comp = 0.0;
  for (const auto& [key, phi] : fam.tables[rho - 1].values) {
    const std::vector<int> m = level_at_risk(fam, rho, key);
    double w = phi.to_double();
    for (int a = 0; a < naxes; ++a) {
      w *= Rational(binomial(m[a], key[a]), 1).to_double();
      if (key[a] > 0) w *= std::pow(surv[a], key[a]);
      if (m[a] - key[a] > 0) w *= std::pow(fail[a], m[a] - key[a]);
    }
    const double y = w - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

SurvivalCurve reliability_curve(const PhasedSystem& sys, const SignatureFamily& fam,
                                int grid_points) {
  const std::vector<double> b = sys.boundaries();
  const int n = static_cast<int>(b.size()) - 1;
  std::vector<EvalPoint> pts;
  pts.push_back(EvalPoint::interior(0.0));
  for (int i = 1; i < n; ++i) {
    pts.push_back(EvalPoint::left(b[i]));
    pts.push_back(EvalPoint::right(b[i]));
  }
  pts.push_back(EvalPoint::interior(b[n]));
  if (grid_points > 1) {
    const double end = b[n];
    for (int g = 1; g < grid_points - 1; ++g) {
      double t = end * g / (grid_points - 1);
      if (std::find(b.begin(), b.end(), t) == b.end()) pts.push_back(EvalPoint::interior(t));
    }
  }
  auto rank = [](EvalPoint::Side s) {
    return s == EvalPoint::Side::Left ? 0 : (s == EvalPoint::Side::Interior ? 1 : 2);
  };
  std::sort(pts.begin(), pts.end(), [&](const EvalPoint& a, const EvalPoint& c) {
    if (a.t != c.t) return a.t < c.t;
    return rank(a.side) < rank(c.side);
  });

  SurvivalCurve curve;
  for (const auto& pt : pts) curve.samples.emplace_back(pt, system_reliability(sys, fam, pt));
  for (int i = 1; i < n; ++i) {
    double left = 0, right = 0;
    for (const auto& [pt, r] : curve.samples) {
      if (pt.t == b[i] && pt.side == EvalPoint::Side::Left) left = r;
      if (pt.t == b[i] && pt.side == EvalPoint::Side::Right) right = r;
    }
    curve.jumps.push_back({i + 1, b[i], left - right});
  }
  return curve;
}

void write_curve_csv(const SurvivalCurve& curve, std::ostream& os) {
  os << "t,side,R,jump\n";
  char buf[40];
  for (const auto& [pt, r] : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.12g", pt.t);
    os << buf << "," << side_name(pt.side) << ",";
    std::snprintf(buf, sizeof buf, "%.12g", r);
    os << buf << ",";
    if (pt.side == EvalPoint::Side::Right) {
      for (const auto& j : curve.jumps)
        if (j.t == pt.t) {
          std::snprintf(buf, sizeof buf, "%.12g", j.delta);
          os << buf;
        }
    }
    os << "\n";
  }
}

}  // namespace pms
