#pragma once

#include <string>
#include <vector>

namespace pms {

/**
 * Lifetime law of a physical component type.
 *
 * Three modes cover the usual ways piecewise mission lifetimes are given:
 *  - GlobalExponential / GlobalWeibull: one mission-wide CDF F(t); the
 *    conditional law inside phase i follows from F by conditioning on
 *    survival to the phase start (wall-clock ageing).
 *  - PhaseConditional: each phase carries its own conditional law on local
 *    time t - tau_i, already conditioned on survival to tau_i.
 *  - PhaseHazard: constant hazard per phase; rate 0 means no ageing there.
 */
struct LifetimeModel {
  enum class Kind { GlobalExponential, GlobalWeibull, PhaseConditional, PhaseHazard };

  struct PhaseLaw {
    enum class Dist { Exponential, Weibull };
    Dist dist = Dist::Exponential;
    double rate = 0.0;   // Exponential
    double scale = 0.0;  // Weibull
    double shape = 0.0;  // Weibull
  };

  Kind kind = Kind::GlobalExponential;
  double rate = 0.0;                  // GlobalExponential
  double scale = 0.0, shape = 0.0;    // GlobalWeibull
  std::vector<PhaseLaw> phase_laws;   // PhaseConditional, index = phase - 1
  std::vector<double> phase_rates;    // PhaseHazard, index = phase - 1

  /// True when the conditional law inside any phase does not depend on the
  /// component's ageing history (the property the exponential meta-type
  /// relaxation relies on).
  bool history_free() const {
    return kind != Kind::GlobalWeibull;
  }

  static LifetimeModel global_exponential(double lambda) {
    LifetimeModel m;
    m.kind = Kind::GlobalExponential;
    m.rate = lambda;
    return m;
  }
  static LifetimeModel global_weibull(double scale, double shape) {
    LifetimeModel m;
    m.kind = Kind::GlobalWeibull;
    m.scale = scale;
    m.shape = shape;
    return m;
  }
  static LifetimeModel phase_hazard(std::vector<double> rates) {
    LifetimeModel m;
    m.kind = Kind::PhaseHazard;
    m.phase_rates = std::move(rates);
    return m;
  }
  static LifetimeModel phase_conditional(std::vector<PhaseLaw> laws) {
    LifetimeModel m;
    m.kind = Kind::PhaseConditional;
    m.phase_laws = std::move(laws);
    return m;
  }
};

struct PhysicalType {
  std::string name;
  LifetimeModel lifetime;
};

struct Component {
  std::string name;
  int type = -1;  // index into PhasedSystem::types
};

/**
 * Coherent structure expression: atoms joined by AND / OR / K_OF_N.
 * K_OF_N children are component atoms; evaluation counts functioning ones.
 * No negation node exists, so every expression is monotone by construction.
 */
struct StructureExpr {
  enum class Kind { Atom, And, Or, KofN };

  Kind kind = Kind::Atom;
  int atom = -1;  // component index, Atom only
  int k = 0;      // threshold, KofN only
  std::vector<StructureExpr> children;

  static StructureExpr atom_of(int component) {
    StructureExpr e;
    e.kind = Kind::Atom;
    e.atom = component;
    return e;
  }
  static StructureExpr and_of(std::vector<StructureExpr> ch) {
    StructureExpr e;
    e.kind = Kind::And;
    e.children = std::move(ch);
    return e;
  }
  static StructureExpr or_of(std::vector<StructureExpr> ch) {
    StructureExpr e;
    e.kind = Kind::Or;
    e.children = std::move(ch);
    return e;
  }
  static StructureExpr k_of_n(int k, std::vector<StructureExpr> ch) {
    StructureExpr e;
    e.kind = Kind::KofN;
    e.k = k;
    e.children = std::move(ch);
    return e;
  }

  /// Collects the component indices of every atom in the tree.
  void collect_atoms(std::vector<int>* out) const;
};

/// One phase: [start, end) with an explicit component set and a structure.
/// Present components are at risk for the whole phase even when the
/// structure never references them.
struct PhaseSpec {
  int index = 0;  // 1-based
  double start = 0.0;
  double end = 0.0;
  std::vector<int> components;  // sorted component indices present in the phase
  StructureExpr structure;

  bool contains_component(int c) const;
};

/**
 * Immutable mission model: N >= 2 phases over absolute boundaries
 * tau_1 = 0 < tau_2 < ... < tau_{N+1}, shared component and type tables.
 */
struct PhasedSystem {
  std::vector<PhysicalType> types;
  std::vector<Component> components;
  std::vector<PhaseSpec> phases;

  int phase_count() const { return static_cast<int>(phases.size()); }
  double mission_end() const { return phases.empty() ? 0.0 : phases.back().end; }

  /// tau_1 .. tau_{N+1} as a flat array (size N+1, boundaries()[0] == 0).
  std::vector<double> boundaries() const;

  /// Sorted list of phases (1-based) where component c is present.
  std::vector<int> presence(int c) const;

  /// Index of a component by name, -1 when absent.
  int component_index(const std::string& name) const;
};

struct Violation {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;     // short machine-readable tag, e.g. "non-increasing boundary"
  std::string message;  // human-readable context
};

/// Validation report; empty error list = valid system.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const {
    for (const auto& v : violations)
      if (v.severity == Violation::Severity::Error) return false;
    return true;
  }
  std::vector<Violation> errors() const;
  std::vector<Violation> warnings() const;
};

/// Checks every structural invariant of the model; never throws.
/// Idempotent and side-effect free.
ValidationReport validate_system(const PhasedSystem& sys);

}  // namespace pms
