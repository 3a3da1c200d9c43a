#include "pms/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pms {

void StructureExpr::collect_atoms(std::vector<int>* out) const {
  if (kind == Kind::Atom) {
    out->push_back(atom);
    return;
  }
  for (const auto& child : children) child.collect_atoms(out);
}

bool PhaseSpec::contains_component(int c) const {
  return std::binary_search(components.begin(), components.end(), c);
}

std::vector<double> PhasedSystem::boundaries() const {
  std::vector<double> b;
  b.reserve(phases.size() + 1);
  for (const auto& ph : phases) b.push_back(ph.start);
  if (!phases.empty()) b.push_back(phases.back().end);
  return b;
}

std::vector<int> PhasedSystem::presence(int c) const {
  std::vector<int> out;
  for (const auto& ph : phases)
    if (ph.contains_component(c)) out.push_back(ph.index);
  return out;
}

int PhasedSystem::component_index(const std::string& name) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (components[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<Violation> ValidationReport::errors() const {
  std::vector<Violation> out;
  for (const auto& v : violations)
    if (v.severity == Violation::Severity::Error) out.push_back(v);
  return out;
}

std::vector<Violation> ValidationReport::warnings() const {
  std::vector<Violation> out;
  for (const auto& v : violations)
    if (v.severity == Violation::Severity::Warning) out.push_back(v);
  return out;
}

namespace {

void add(ValidationReport* rep, Violation::Severity sev, std::string code, std::string msg) {
  rep->violations.push_back({sev, std::move(code), std::move(msg)});
}

void check_structure(const PhasedSystem& sys, const PhaseSpec& ph, const StructureExpr& e,
                     ValidationReport* rep) {
  using K = StructureExpr::Kind;
  std::ostringstream ctx;
  switch (e.kind) {
    case K::Atom:
      if (e.atom < 0 || e.atom >= static_cast<int>(sys.components.size())) {
        ctx << "phase " << ph.index << ": atom references unknown component index " << e.atom;
        add(rep, Violation::Severity::Error, "unknown atom", ctx.str());
      } else if (!ph.contains_component(e.atom)) {
        ctx << "phase " << ph.index << ": atom '" << sys.components[e.atom].name
            << "' is not in the phase's component set";
        add(rep, Violation::Severity::Error, "unknown atom", ctx.str());
      }
      return;
    case K::And:
    case K::Or:
      if (e.children.empty()) {
        ctx << "phase " << ph.index << ": " << (e.kind == K::And ? "and" : "or")
            << " node with no children";
        add(rep, Violation::Severity::Error, "empty gate", ctx.str());
      }
      break;
    case K::KofN: {
      int n = static_cast<int>(e.children.size());
      if (e.k < 1 || e.k > n) {
        ctx << "phase " << ph.index << ": koutofn threshold " << e.k << " outside [1, " << n
            << "]";
        add(rep, Violation::Severity::Error, "bad k-of-n threshold", ctx.str());
      }
      for (const auto& c : e.children)
        if (c.kind != K::Atom) {
          std::ostringstream m;
          m << "phase " << ph.index << ": koutofn children must be component atoms";
          add(rep, Violation::Severity::Error, "bad k-of-n child", m.str());
          break;
        }
      break;
    }
  }
  for (const auto& c : e.children) check_structure(sys, ph, c, rep);
}

void check_lifetime(const PhysicalType& t, int n_phases, ValidationReport* rep) {
  const LifetimeModel& lm = t.lifetime;
  auto err = [&](const std::string& code, const std::string& msg) {
    add(rep, Violation::Severity::Error, code, "type '" + t.name + "': " + msg);
  };
  switch (lm.kind) {
    case LifetimeModel::Kind::GlobalExponential:
      if (!(lm.rate >= 0) || !std::isfinite(lm.rate)) err("bad rate", "rate must be >= 0");
      break;
    case LifetimeModel::Kind::GlobalWeibull:
      if (!(lm.scale > 0)) err("bad scale", "scale must be > 0");
      if (!(lm.shape > 0)) err("bad shape", "shape must be > 0");
      break;
    case LifetimeModel::Kind::PhaseHazard:
      if (static_cast<int>(lm.phase_rates.size()) != n_phases)
        err("bad rate count", "phase_hazard needs one rate per phase");
      for (double r : lm.phase_rates)
        if (!(r >= 0) || !std::isfinite(r)) err("bad rate", "rates must be >= 0");
      break;
    case LifetimeModel::Kind::PhaseConditional:
      if (static_cast<int>(lm.phase_laws.size()) != n_phases)
        err("bad law count", "phase_conditional needs one law per phase");
      for (const auto& law : lm.phase_laws) {
        if (law.dist == LifetimeModel::PhaseLaw::Dist::Exponential) {
          if (!(law.rate >= 0)) err("bad rate", "rate must be >= 0");
        } else {
          if (!(law.scale > 0)) err("bad scale", "scale must be > 0");
          if (!(law.shape > 0)) err("bad shape", "shape must be > 0");
        }
      }
      break;
  }
}

}  // namespace

ValidationReport validate_system(const PhasedSystem& sys) {
  ValidationReport rep;
  const int n = sys.phase_count();

  if (n < 2)
    add(&rep, Violation::Severity::Error, "too few phases",
        "a phased mission needs at least 2 phases");

  // boundaries: tau_1 = 0, strictly increasing, contiguous 1-based indices
  for (int i = 0; i < n; ++i) {
    const PhaseSpec& ph = sys.phases[i];
    if (ph.index != i + 1) {
      std::ostringstream m;
      m << "phase at position " << i << " has index " << ph.index << ", expected " << i + 1;
      add(&rep, Violation::Severity::Error, "non-contiguous phase index", m.str());
    }
    if (i == 0 && ph.start != 0.0)
      add(&rep, Violation::Severity::Error, "nonzero mission start",
          "phase 1 must start at tau_1 = 0");
    if (!(ph.end > ph.start)) {
      std::ostringstream m;
      m << "phase " << ph.index << ": end " << ph.end << " must exceed start " << ph.start;
      add(&rep, Violation::Severity::Error, "non-increasing boundary", m.str());
    }
    if (i > 0 && ph.start != sys.phases[i - 1].end) {
      std::ostringstream m;
      m << "phase " << ph.index << " starts at " << ph.start << " but phase " << i
        << " ends at " << sys.phases[i - 1].end;
      add(&rep, Violation::Severity::Error, "gapped boundary", m.str());
    }
  }

  // components: unique non-empty names, valid type references, appear somewhere
  std::set<std::string> names;
  for (size_t c = 0; c < sys.components.size(); ++c) {
    const Component& comp = sys.components[c];
    if (comp.name.empty())
      add(&rep, Violation::Severity::Error, "empty component name",
          "component names must be non-empty");
    if (!names.insert(comp.name).second)
      add(&rep, Violation::Severity::Error, "duplicate component",
          "component '" + comp.name + "' declared twice");
    if (comp.type < 0 || comp.type >= static_cast<int>(sys.types.size()))
      add(&rep, Violation::Severity::Error, "unknown physical type",
          "component '" + comp.name + "' references no declared physical type");
    if (sys.presence(static_cast<int>(c)).empty())
      add(&rep, Violation::Severity::Error, "unused component",
          "component '" + comp.name + "' appears in no phase");
  }

  for (const auto& t : sys.types) check_lifetime(t, n, &rep);

  // phase component sets and structures
  for (const auto& ph : sys.phases) {
    for (int c : ph.components)
      if (c < 0 || c >= static_cast<int>(sys.components.size())) {
        std::ostringstream m;
        m << "phase " << ph.index << " lists unknown component index " << c;
        add(&rep, Violation::Severity::Error, "unknown component", m.str());
      }
    if (ph.components.empty()) {
      std::ostringstream m;
      m << "phase " << ph.index << " has an empty component set";
      add(&rep, Violation::Severity::Error, "empty phase", m.str());
    }
    check_structure(sys, ph, ph.structure, &rep);

    // present but structurally irrelevant components: warning only
    std::vector<int> atoms;
    ph.structure.collect_atoms(&atoms);
    std::sort(atoms.begin(), atoms.end());
    for (int c : ph.components)
      if (!std::binary_search(atoms.begin(), atoms.end(), c) && c >= 0 &&
          c < static_cast<int>(sys.components.size())) {
        std::ostringstream m;
        m << "phase " << ph.index << ": component '" << sys.components[c].name
          << "' is present (at risk) but never appears in the structure";
        add(&rep, Violation::Severity::Warning, "structurally irrelevant component", m.str());
      }
  }

  return rep;
}

}  // namespace pms
