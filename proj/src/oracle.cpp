#include "pms/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace pms {

namespace {

bool eval_alive(const StructureExpr& e, const std::vector<char>& alive) {
  using K = StructureExpr::Kind;
  switch (e.kind) {
    case K::Atom:
      return alive[e.atom] != 0;
    case K::And:
      for (const auto& c : e.children)
        if (!eval_alive(c, alive)) return false;
      return true;
    case K::Or:
      for (const auto& c : e.children)
        if (eval_alive(c, alive)) return true;
      return false;
    case K::KofN: {
      int working = 0;
      for (const auto& c : e.children)
        if (eval_alive(c, alive)) ++working;
      return working >= e.k;
    }
  }
  return false;
}

constexpr double kZ99 = 2.5758293035489004;  // 99.5% normal quantile

void wilson(SimResult* r) {
  const double n = static_cast<double>(r->trials);
  const double phat = n > 0 ? static_cast<double>(r->survived) / n : 0.0;
  const double z2 = kZ99 * kZ99;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double hw = kZ99 * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  r->estimate = phat;
  r->half_width = hw;
  r->ci_lo = std::max(0.0, center - hw);
  r->ci_hi = std::min(1.0, center + hw);
}

}  // namespace

double mission_failure_time(const PhasedSystem& sys, const std::vector<double>& failure_times) {
  const std::vector<double> b = sys.boundaries();
  const int n = sys.phase_count();
  std::vector<char> alive(sys.components.size(), 0);

  for (int i = 1; i <= n; ++i) {
    const PhaseSpec& ph = sys.phases[i - 1];

    // state at the phase start tau_i+
    for (int c : ph.components) alive[c] = failure_times[c] > b[i - 1] ? 1 : 0;
    if (!eval_alive(ph.structure, alive)) return b[i - 1];

    // state at the phase end; if the phase still functions nothing in
    // between can have failed it (monotone, non-repairable)
    for (int c : ph.components) alive[c] = failure_times[c] > b[i] ? 1 : 0;
    if (eval_alive(ph.structure, alive)) continue;

    // scan in-phase failure instants for the first drop
    std::vector<std::pair<double, int>> deaths;
    for (int c : ph.components)
      if (failure_times[c] > b[i - 1] && failure_times[c] <= b[i])
        deaths.emplace_back(failure_times[c], c);
    std::sort(deaths.begin(), deaths.end());
    for (int c : ph.components) alive[c] = failure_times[c] > b[i - 1] ? 1 : 0;
    for (const auto& [when, c] : deaths) {
      alive[c] = 0;
      if (!eval_alive(ph.structure, alive)) return when;
    }
    return b[i];  // unreachable for coherent structures
  }
  return std::numeric_limits<double>::infinity();
}

MissionDraw simulate_mission(const PhasedSystem& sys, RngStream& rng) {
  const std::vector<double> b = sys.boundaries();
  MissionDraw draw;
  draw.failure_times.resize(sys.components.size());
  for (size_t c = 0; c < sys.components.size(); ++c) {
    const LifetimeModel& lm = sys.types[sys.components[c].type].lifetime;
    draw.failure_times[c] =
        sample_lifetime(lm, b, sys.presence(static_cast<int>(c)), rng);
  }
  draw.mission_failure_time = mission_failure_time(sys, draw.failure_times);
  return draw;
}

std::vector<SimResult> estimate_curve(const PhasedSystem& sys,
                                      const std::vector<EvalPoint>& points,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int threads) {
  const std::vector<double> b = sys.boundaries();
  const size_t ncomp = sys.components.size();
  std::vector<std::vector<int>> presence(ncomp);
  for (size_t c = 0; c < ncomp; ++c) presence[c] = sys.presence(static_cast<int>(c));

  const size_t npts = points.size();
  auto worker = [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>* counts) {
    std::vector<double> ft(ncomp);
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      RngStream rng = RngStream::at(seed, trial);
      for (size_t c = 0; c < ncomp; ++c)
        ft[c] = sample_lifetime(sys.types[sys.components[c].type].lifetime, b, presence[c], rng);
      const double tfail = mission_failure_time(sys, ft);
      for (size_t p = 0; p < npts; ++p) {
        const bool survived = points[p].side == EvalPoint::Side::Left
                                  ? tfail >= points[p].t
                                  : tfail > points[p].t;
        if (survived) ++(*counts)[p];
      }
    }
  };

  std::vector<std::uint64_t> total(npts, 0);
  if (threads <= 1) {
    worker(0, trials, &total);
  } else {
    std::vector<std::vector<std::uint64_t>> partial(threads,
                                                    std::vector<std::uint64_t>(npts, 0));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t lo = std::min<std::uint64_t>(trials, t * chunk);
      const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
      pool.emplace_back(worker, lo, hi, &partial[t]);
    }
    for (auto& th : pool) th.join();
    for (const auto& part : partial)
      for (size_t p = 0; p < npts; ++p) total[p] += part[p];
  }

  std::vector<SimResult> results(npts);
  for (size_t p = 0; p < npts; ++p) {
    results[p].point = points[p];
    results[p].survived = total[p];
    results[p].trials = trials;
    wilson(&results[p]);
  }
  return results;
}

void write_sim_csv(const std::vector<SimResult>& results, std::ostream& os) {
  os << "t,side,estimate,half_width,survived,trials\n";
  char buf[40];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%.12g", r.point.t);
    os << buf << "," << side_name(r.point.side) << ",";
    std::snprintf(buf, sizeof buf, "%.12g", r.estimate);
    os << buf << ",";
    std::snprintf(buf, sizeof buf, "%.12g", r.half_width);
    os << buf << "," << r.survived << "," << r.trials << "\n";
  }
}

}  // namespace pms
