#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "pms/model.hpp"
#include "pms/rational.hpp"
#include "pms/structure.hpp"

namespace pms {

/// One axis of a signature table: functioning count of meta-type `metatype`
/// in phase `phase`.  Axes exist only where the meta-type is present.
struct LevelAxis {
  int phase = 0;     // 1-based
  int metatype = 0;  // 0-based position in the MetaTypeAssignment
};

/// Level vector l: counts in axis order (all axes of phases 1..p).
using LevelKey = std::vector<int>;

/**
 * How the at-risk count m_ik of each meta-type evolves across its phases:
 * survivors of earlier at-risk pools carry into the next phase where their
 * members are present, plus members entering for the first time.  Built once
 * per (system, meta-type assignment) pair; this is what makes m_ik a
 * function of the level history alone.
 */
struct CountingPlan {
  struct PhaseEntry {
    int phase = 0;
    std::vector<int> carried_from;  // earlier phases whose survivors are at risk here
    std::vector<int> fresh;         // component indices first at risk here
  };
  // per metatype: its PhaseEntry list in ascending phase order
  std::vector<std::vector<PhaseEntry>> per_type;
  std::vector<LevelAxis> axes;        // all axes, phases ascending then metatype id
  std::vector<int> axes_until_phase;  // #axes with phase <= i, index i (0..N)

  int axis_count(int p) const { return axes_until_phase[p]; }
};

CountingPlan build_counting_plan(const PhasedSystem& sys, const MetaTypeAssignment& mta);

/// Sparse exact table of Phi_p values keyed by level vector; zero entries
/// are omitted, mirroring the paper's table layout.
struct SignatureTable {
  int depth = 0;  // p
  std::map<LevelKey, Rational> values;
};

/// The family Phi_1 .. Phi_N for one system under one meta-type assignment.
struct SignatureFamily {
  MetaTypeAssignment mta;
  CountingPlan plan;
  std::vector<SignatureTable> tables;  // index p-1

  int depth() const { return static_cast<int>(tables.size()); }
};

/**
 * Computes the whole family exactly by depth-first enumeration of nested
 * survivor-subset chains, independently per meta-type.  Consistency of
 * trajectories (no failed component returns) holds by construction; a chain
 * whose prefix already fails some phase is pruned since coherent structures
 * make every deeper product zero.
 */
SignatureFamily compute_signature_family(const PhasedSystem& sys,
                                         const MetaTypeAssignment& mta);

/// Per-axis at-risk counts m for a level vector at depth p.
/// Throws InfeasibleLevelError when l violates the m-recursion.
std::vector<int> level_at_risk(const SignatureFamily& fam, int p, const LevelKey& l);

/// Table lookup with feasibility check; feasible-but-omitted vectors are 0.
Rational signature_at(const SignatureFamily& fam, int p, const LevelKey& l);

/// All feasible level vectors at depth p, in lexicographic order.
std::vector<LevelKey> enumerate_feasible_levels(const SignatureFamily& fam, int p);

/**
 * Definitional oracle: enumerates every consistent mission trajectory with
 * exactly the requested functioning counts and averages the phase products.
 * Independent of the chain enumeration above.  Guarded to at most 24
 * component-phase slots (throws TooLargeError beyond).
 */
Rational brute_force_signature(const PhasedSystem& sys, const MetaTypeAssignment& mta,
                               int p, const LevelKey& l);

/// CSV export of one table: l-columns, numerator, denominator, decimal.
void write_signature_csv(const SignatureFamily& fam, int p, std::ostream& os);

/// Aligned text rendering of the whole family, one block per phase depth.
void write_signature_text(const SignatureFamily& fam, std::ostream& os);

/// Column header for an axis, e.g. "l_2,1" (phase 2, meta-type 1).
std::string axis_label(const LevelAxis& axis);

}  // namespace pms
