#include "pms/signature.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "pms/errors.hpp"

namespace pms {

namespace {

// Structure evaluation on a flat alive vector; atoms are pre-validated.
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

int next_present_after(const std::vector<int>& presence, int phase) {
  for (int p : presence)
    if (p > phase) return p;
  return 0;
}

}  // namespace

CountingPlan build_counting_plan(const PhasedSystem& sys, const MetaTypeAssignment& mta) {
  const int n = sys.phase_count();
  CountingPlan plan;
  plan.per_type.resize(mta.count());

  for (int k = 0; k < mta.count(); ++k) {
    const MetaType& mt = mta.metatypes[k];
    std::vector<std::vector<int>> member_presence;
    member_presence.reserve(mt.members.size());
    for (int m : mt.members) member_presence.push_back(sys.presence(m));

    // per phase: members present there
    std::vector<std::vector<int>> present_members(n + 1);
    for (size_t mi = 0; mi < mt.members.size(); ++mi)
      for (int ph : member_presence[mi]) present_members[ph].push_back(mt.members[mi]);

    // shared flow target per phase; all members of one pool must move together
    std::vector<int> flows_to(n + 1, 0);
    for (int ph = 1; ph <= n; ++ph) {
      int shared = -1;
      for (size_t mi = 0; mi < mt.members.size(); ++mi) {
        const auto& pres = member_presence[mi];
        if (!std::binary_search(pres.begin(), pres.end(), ph)) continue;
        int nxt = next_present_after(pres, ph);
        if (shared == -1)
          shared = nxt;
        else if (shared != nxt)
          throw Error("meta-type " + std::to_string(mt.id) +
                      ": members present in phase " + std::to_string(ph) +
                      " diverge afterwards; at-risk counts are not determined by "
                      "level counts");
      }
      flows_to[ph] = std::max(shared, 0);
    }

    for (int ph = 1; ph <= n; ++ph) {
      if (present_members[ph].empty()) continue;
      CountingPlan::PhaseEntry entry;
      entry.phase = ph;
      for (int j = 1; j < ph; ++j)
        if (!present_members[j].empty() && flows_to[j] == ph) entry.carried_from.push_back(j);
      for (size_t mi = 0; mi < mt.members.size(); ++mi)
        if (!member_presence[mi].empty() && member_presence[mi].front() == ph)
          entry.fresh.push_back(mt.members[mi]);
      plan.per_type[k].push_back(std::move(entry));
    }
  }

  plan.axes_until_phase.assign(n + 1, 0);
  for (int ph = 1; ph <= n; ++ph) {
    for (int k = 0; k < mta.count(); ++k)
      for (const auto& e : plan.per_type[k])
        if (e.phase == ph) plan.axes.push_back({ph, k});
    plan.axes_until_phase[ph] = static_cast<int>(plan.axes.size());
  }
  return plan;
}

namespace {

int axis_position(const CountingPlan& plan, int phase, int metatype) {
  for (int i = 0; i < static_cast<int>(plan.axes.size()); ++i)
    if (plan.axes[i].phase == phase && plan.axes[i].metatype == metatype) return i;
  return -1;
}

const CountingPlan::PhaseEntry* plan_entry(const CountingPlan& plan, int metatype, int phase) {
  for (const auto& e : plan.per_type[metatype])
    if (e.phase == phase) return &e;
  return nullptr;
}

// DFS over nested survivor-subset chains, all meta-types jointly, phases in
// order.  Each completed choice of subsets for phases 1..p is one chain;
// chains whose prefix fails phi_i never extend (coherent structures make
// every deeper product zero).
struct ChainEnumerator {
  const PhasedSystem& sys;
  const MetaTypeAssignment& mta;
  const CountingPlan& plan;
  std::vector<std::map<LevelKey, BigInt>> counts;  // per depth p-1
  std::vector<char> alive;
  LevelKey key;

  ChainEnumerator(const PhasedSystem& s, const MetaTypeAssignment& m, const CountingPlan& p)
      : sys(s), mta(m), plan(p) {
    counts.resize(sys.phase_count());
    alive.assign(sys.components.size(), 1);
  }

  void run() { descend_phase(1); }

  void descend_phase(int phase) {
    choose_axis(phase, plan.axes_until_phase[phase - 1]);
  }

  void choose_axis(int phase, int axis_idx) {
    if (axis_idx == plan.axes_until_phase[phase]) {
      if (!eval_alive(sys.phases[phase - 1].structure, alive)) return;  // prune
      counts[phase - 1][key] += 1;
      if (phase < sys.phase_count()) descend_phase(phase + 1);
      return;
    }
    const LevelAxis& axis = plan.axes[axis_idx];
    const MetaType& mt = mta.metatypes[axis.metatype];

    // at-risk pool: members present in this phase and still alive
    std::vector<int> pool;
    for (int m : mt.members)
      if (sys.phases[phase - 1].contains_component(m) && alive[m]) pool.push_back(m);

    const int psize = static_cast<int>(pool.size());
    for (unsigned mask = 0; mask < (1u << psize); ++mask) {
      int survivors = 0;
      for (int b = 0; b < psize; ++b) {
        bool lives = (mask >> b) & 1u;
        alive[pool[b]] = lives ? 1 : 0;
        if (lives) ++survivors;
      }
      key.push_back(survivors);
      choose_axis(phase, axis_idx + 1);
      key.pop_back();
    }
    for (int b = 0; b < psize; ++b) alive[pool[b]] = 1;
  }
};

}  // namespace

SignatureFamily compute_signature_family(const PhasedSystem& sys,
                                         const MetaTypeAssignment& mta) {
  SignatureFamily fam;
  fam.mta = mta;
  fam.plan = build_counting_plan(sys, mta);
  fam.tables.resize(sys.phase_count());

  ChainEnumerator dfs(sys, mta, fam.plan);
  dfs.run();

  for (int p = 1; p <= sys.phase_count(); ++p) {
    SignatureTable& table = fam.tables[p - 1];
    table.depth = p;
    for (auto& [lkey, count] : dfs.counts[p - 1]) {
      std::vector<int> m = level_at_risk(fam, p, lkey);
      BigInt den = 1;
      for (size_t a = 0; a < lkey.size(); ++a) den *= binomial(m[a], lkey[a]);
      table.values.emplace(lkey, Rational(count, den));
    }
  }
  return fam;
}

std::vector<int> level_at_risk(const SignatureFamily& fam, int p, const LevelKey& l) {
  const CountingPlan& plan = fam.plan;
  if (static_cast<int>(l.size()) != plan.axis_count(p))
    throw InfeasibleLevelError("level vector has " + std::to_string(l.size()) +
                               " entries, expected " + std::to_string(plan.axis_count(p)));
  std::vector<int> m(l.size(), 0);
  for (size_t a = 0; a < l.size(); ++a) {
    const LevelAxis& axis = plan.axes[a];
    const CountingPlan::PhaseEntry* entry = plan_entry(plan, axis.metatype, axis.phase);
    int at_risk = static_cast<int>(entry->fresh.size());
    for (int j : entry->carried_from) {
      int pos = axis_position(plan, j, axis.metatype);
      at_risk += l[pos];
    }
    m[a] = at_risk;
    if (l[a] < 0 || l[a] > at_risk) {
      std::ostringstream msg;
      msg << "l_" << axis.phase << "," << axis.metatype + 1 << " = " << l[a]
          << " violates 0 <= l <= m with m = " << at_risk;
      throw InfeasibleLevelError(msg.str());
    }
  }
  return m;
}

Rational signature_at(const SignatureFamily& fam, int p, const LevelKey& l) {
  if (p < 1 || p > fam.depth())
    throw InfeasibleLevelError("phase depth " + std::to_string(p) + " outside family");
  level_at_risk(fam, p, l);  // feasibility check
  const auto& values = fam.tables[p - 1].values;
  auto it = values.find(l);
  return it == values.end() ? Rational(0) : it->second;
}

std::vector<LevelKey> enumerate_feasible_levels(const SignatureFamily& fam, int p) {
  std::vector<LevelKey> out;
  LevelKey key;
  const CountingPlan& plan = fam.plan;

  std::function<void(int)> rec = [&](int axis_idx) {
    if (axis_idx == plan.axis_count(p)) {
      out.push_back(key);
      return;
    }
    const LevelAxis& axis = plan.axes[axis_idx];
    const CountingPlan::PhaseEntry* entry = plan_entry(plan, axis.metatype, axis.phase);
    int at_risk = static_cast<int>(entry->fresh.size());
    for (int j : entry->carried_from)
      at_risk += key[axis_position(plan, j, axis.metatype)];
    for (int l = 0; l <= at_risk; ++l) {
      key.push_back(l);
      rec(axis_idx + 1);
      key.pop_back();
    }
  };
  rec(0);
  return out;
}

Rational brute_force_signature(const PhasedSystem& sys, const MetaTypeAssignment& mta,
                               int p, const LevelKey& l) {
  const CountingPlan plan = build_counting_plan(sys, mta);
  if (static_cast<int>(l.size()) != plan.axis_count(p))
    throw InfeasibleLevelError("level vector size mismatch");

  // per component: death options among its present phases <= p, plus survival
  const int ncomp = static_cast<int>(sys.components.size());
  std::vector<std::vector<int>> options(ncomp);  // 0 = survives through p
  int slots = 0;
  for (int c = 0; c < ncomp; ++c) {
    options[c].push_back(0);
    for (int ph : sys.presence(c))
      if (ph <= p) {
        options[c].push_back(ph);
        ++slots;
      }
  }
  if (slots > 24)
    throw TooLargeError("brute-force enumeration guard: " + std::to_string(slots) +
                        " component-phase slots exceed 24");

  BigInt matching = 0, functioning = 0;
  std::vector<int> death(ncomp, 0);
  std::vector<size_t> pick(ncomp, 0);
  std::vector<char> alive(ncomp, 1);

  auto level_of = [&](int phase, int metatype) {
    int count = 0;
    for (int m : mta.metatypes[metatype].members)
      if (sys.phases[phase - 1].contains_component(m) &&
          (death[m] == 0 || death[m] > phase))
        ++count;
    return count;
  };

  while (true) {
    for (int c = 0; c < ncomp; ++c) death[c] = options[c][pick[c]];

    bool match = true;
    for (int a = 0; a < plan.axis_count(p) && match; ++a)
      if (level_of(plan.axes[a].phase, plan.axes[a].metatype) != l[a]) match = false;

    if (match) {
      matching += 1;
      bool works = true;
      for (int ph = 1; ph <= p && works; ++ph) {
        for (int c = 0; c < ncomp; ++c) alive[c] = (death[c] == 0 || death[c] > ph) ? 1 : 0;
        works = eval_alive(sys.phases[ph - 1].structure, alive);
      }
      if (works) functioning += 1;
    }

    int c = 0;
    while (c < ncomp && ++pick[c] == options[c].size()) pick[c++] = 0;
    if (c == ncomp) break;
  }
  if (matching == 0) return Rational(0);
  return Rational(functioning, matching);
}

std::string axis_label(const LevelAxis& axis) {
  return "l_" + std::to_string(axis.phase) + "_" + std::to_string(axis.metatype + 1);
}

void write_signature_csv(const SignatureFamily& fam, int p, std::ostream& os) {
  const CountingPlan& plan = fam.plan;
  for (int a = 0; a < plan.axis_count(p); ++a) os << axis_label(plan.axes[a]) << ",";
  os << "numerator,denominator,decimal\n";
  for (const auto& [key, value] : fam.tables[p - 1].values) {
    for (int v : key) os << v << ",";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value.to_double());
    os << value.num() << "," << value.den() << "," << buf << "\n";
  }
}

void write_signature_text(const SignatureFamily& fam, std::ostream& os) {
  const CountingPlan& plan = fam.plan;
  for (int p = 1; p <= fam.depth(); ++p) {
    os << "Phi_" << p << "  (mission survival through phase " << p << ")\n";
    for (int a = 0; a < plan.axis_count(p); ++a)
      os << std::setw(7) << axis_label(plan.axes[a]);
    os << std::setw(12) << "Phi" << "\n";
    for (const auto& [key, value] : fam.tables[p - 1].values) {
      for (int v : key) os << std::setw(7) << v;
      os << std::setw(12) << value.str() << "\n";
    }
    os << "\n";
  }
}

}  // namespace pms
