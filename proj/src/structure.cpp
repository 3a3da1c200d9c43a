#include "pms/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pms/errors.hpp"

namespace pms {

namespace {

bool atom_state(const PhaseState& state, int atom) {
  auto it = state.working.find(atom);
  if (it == state.working.end()) {
    std::ostringstream m;
    m << "phase " << state.phase << ": no state assigned to component index " << atom;
    throw MissingAtomError(m.str());
  }
  return it->second;
}

}  // namespace

bool eval_phase(const StructureExpr& expr, const PhaseState& state) {
  using K = StructureExpr::Kind;
  switch (expr.kind) {
    case K::Atom:
      return atom_state(state, expr.atom);
    case K::And:
      for (const auto& c : expr.children)
        if (!eval_phase(c, state)) return false;
      return true;
    case K::Or:
      for (const auto& c : expr.children)
        if (eval_phase(c, state)) return true;
      return false;
    case K::KofN: {
      int working = 0;
      for (const auto& c : expr.children)
        if (eval_phase(c, state)) ++working;
      return working >= expr.k;
    }
  }
  return false;
}

bool eval_mission(const PhasedSystem& sys, const MissionTrajectory& traj) {
  // non-repairability across consecutive phases where a component is present
  for (size_t c = 0; c < sys.components.size(); ++c) {
    bool seen_failed = false;
    for (const auto& st : traj.states) {
      auto it = st.working.find(static_cast<int>(c));
      if (it == st.working.end()) continue;
      if (seen_failed && it->second) {
        std::ostringstream m;
        m << "component '" << sys.components[c].name << "' works in phase " << st.phase
          << " after having failed earlier";
        throw InconsistentTrajectoryError(m.str());
      }
      if (!it->second) seen_failed = true;
    }
  }
  for (const auto& ph : sys.phases) {
    const PhaseState& st = traj.states.at(ph.index - 1);
    if (!eval_phase(ph.structure, st)) return false;
  }
  return true;
}

namespace {

struct Group {
  int physical_type = -1;
  std::vector<int> members;                    // component indices
  std::vector<std::vector<int>> presence;      // per member, sorted phases
  int first_phase = 0;
  std::string first_name;

  std::vector<int> appearance() const {
    std::set<int> s;
    for (const auto& p : presence) s.insert(p.begin(), p.end());
    return {s.begin(), s.end()};
  }
};

// Next phase (within a member's own presence set) after phase j; 0 = none.
int next_after(const std::vector<int>& presence, int j) {
  for (int p : presence)
    if (p > j) return p;
  return 0;
}

/**
 * Count-determinism check for a candidate member set: in every phase, all
 * members present there must next be at risk in the same phase (or none),
 * so survivors flow as one stream and the at-risk count in each phase is a
 * function of earlier level counts.  This is the paper's requirement that
 * components which have appeared together keep appearing together.
 */
bool streams_consistent(const std::vector<std::vector<int>>& presences) {
  std::set<int> phases;
  for (const auto& p : presences) phases.insert(p.begin(), p.end());
  for (int j : phases) {
    int shared_next = -1;
    for (const auto& p : presences) {
      if (!std::binary_search(p.begin(), p.end(), j)) continue;
      int nxt = next_after(p, j);
      if (shared_next == -1)
        shared_next = nxt;
      else if (shared_next != nxt)
        return false;
    }
  }
  return true;
}

bool ever_co_present(const Group& a, const Group& b) {
  std::set<int> pa;
  for (const auto& p : a.presence) pa.insert(p.begin(), p.end());
  for (const auto& p : b.presence)
    for (int ph : p)
      if (pa.count(ph)) return true;
  return false;
}

bool merged_consistent(const Group& a, const Group& b) {
  std::vector<std::vector<int>> all = a.presence;
  all.insert(all.end(), b.presence.begin(), b.presence.end());
  return streams_consistent(all);
}

bool canonical_less(const Group& a, const Group& b) {
  if (a.first_phase != b.first_phase) return a.first_phase < b.first_phase;
  return a.first_name < b.first_name;
}

}  // namespace

MetaTypeAssignment derive_meta_types(const PhasedSystem& sys, bool relax_exponential) {
  // strict grouping: (physical type, exact appearance set)
  std::map<std::pair<int, std::vector<int>>, Group> strict;
  for (size_t c = 0; c < sys.components.size(); ++c) {
    std::vector<int> pres = sys.presence(static_cast<int>(c));
    auto key = std::make_pair(sys.components[c].type, pres);
    Group& g = strict[key];
    g.physical_type = sys.components[c].type;
    g.members.push_back(static_cast<int>(c));
    g.presence.push_back(pres);
  }

  std::vector<Group> groups;
  for (auto& [key, g] : strict) {
    g.first_phase = g.presence.front().front();
    g.first_name = sys.components[g.members.front()].name;
    for (int m : g.members) g.first_name = std::min(g.first_name, sys.components[m].name);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), canonical_less);

  std::vector<bool> relaxed(groups.size(), false);
  if (relax_exponential) {
    // Greedy absorption in canonical order.  A later group joins an earlier
    // one when the types match, the two actually share a phase, and the
    // merged presence sets still flow as consistent streams.
    std::vector<bool> absorbed(groups.size(), false);
    for (size_t i = 0; i < groups.size(); ++i) {
      if (absorbed[i]) continue;
      bool changed = true;
      while (changed) {
        changed = false;
        for (size_t j = i + 1; j < groups.size(); ++j) {
          if (absorbed[j]) continue;
          if (groups[j].physical_type != groups[i].physical_type) continue;
          if (!ever_co_present(groups[i], groups[j])) continue;
          if (!merged_consistent(groups[i], groups[j])) continue;
          if (!sys.types[groups[i].physical_type].lifetime.history_free()) {
            std::ostringstream m;
            m << "components of physical type '" << sys.types[groups[i].physical_type].name
              << "' could merge across phase-entry patterns, but its lifetime law is not "
                 "memoryless-per-phase (constant hazard or per-phase conditional)";
            throw RelaxationError(m.str());
          }
          Group& gi = groups[i];
          const Group& gj = groups[j];
          gi.members.insert(gi.members.end(), gj.members.begin(), gj.members.end());
          gi.presence.insert(gi.presence.end(), gj.presence.begin(), gj.presence.end());
          gi.first_phase = std::min(gi.first_phase, gj.first_phase);
          gi.first_name = std::min(gi.first_name, gj.first_name);
          absorbed[j] = true;
          relaxed[i] = true;
          changed = true;
        }
      }
    }
    std::vector<Group> kept;
    std::vector<bool> kept_relaxed;
    for (size_t i = 0; i < groups.size(); ++i)
      if (!absorbed[i]) {
        kept.push_back(std::move(groups[i]));
        kept_relaxed.push_back(relaxed[i]);
      }
    groups = std::move(kept);
    relaxed.assign(kept_relaxed.begin(), kept_relaxed.end());

    // re-canonicalize after merges
    std::vector<size_t> order(groups.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return canonical_less(groups[a], groups[b]); });
    std::vector<Group> sorted;
    std::vector<bool> sorted_relaxed;
    for (size_t idx : order) {
      sorted.push_back(std::move(groups[idx]));
      sorted_relaxed.push_back(relaxed[idx]);
    }
    groups = std::move(sorted);
    relaxed.assign(sorted_relaxed.begin(), sorted_relaxed.end());
  }

  MetaTypeAssignment mta;
  mta.type_of_component.assign(sys.components.size(), -1);
  for (size_t i = 0; i < groups.size(); ++i) {
    MetaType mt;
    mt.id = static_cast<int>(i) + 1;
    mt.physical_type = groups[i].physical_type;
    mt.members = groups[i].members;
    std::sort(mt.members.begin(), mt.members.end(), [&](int a, int b) {
      return sys.components[a].name < sys.components[b].name;
    });
    mt.appearance = groups[i].appearance();
    mt.exponential_relaxed = relaxed[i];
    for (int m : mt.members) mta.type_of_component[m] = static_cast<int>(i);
    mta.metatypes.push_back(std::move(mt));
  }
  return mta;
}

}  // namespace pms
