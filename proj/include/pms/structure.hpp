#pragma once

#include <unordered_map>
#include <vector>

#include "pms/model.hpp"

namespace pms {

/// Component states X_i for one phase, keyed by component index.
/// The assignment must cover exactly the phase's component set.
struct PhaseState {
  int phase = 0;  // 1-based
  std::unordered_map<int, bool> working;
};

/// Full mission state vector X = (X_1, ..., X_N).
/// Non-repairability: a component failed in one phase must not be working
/// in any later phase where it is present.
struct MissionTrajectory {
  std::vector<PhaseState> states;  // one per phase, ascending
};

/// Evaluates a phase structure function on explicit component states.
/// Throws MissingAtomError when an atom has no assigned state.
bool eval_phase(const StructureExpr& expr, const PhaseState& state);

/// phi_S = prod_i phi_i(X_i); throws InconsistentTrajectoryError when the
/// trajectory revives a failed component.
bool eval_mission(const PhasedSystem& sys, const MissionTrajectory& traj);

/**
 * Group of components sharing one conditional lifetime law per phase:
 * same physical type and, in strict mode, exactly the same phase-appearance
 * set. Relaxed groups may stagger entry when the lifetime law is
 * history-free and the members' appearance sets chain consistently.
 */
struct MetaType {
  int id = 0;  // 1-based, deterministic ordering
  int physical_type = -1;
  std::vector<int> members;     // component indices
  std::vector<int> appearance;  // sorted phases where any member is present
  bool exponential_relaxed = false;
};

/// Partition of all components into meta-types.
struct MetaTypeAssignment {
  std::vector<MetaType> metatypes;
  std::vector<int> type_of_component;  // component index -> metatype position (0-based)

  int count() const { return static_cast<int>(metatypes.size()); }
};

/**
 * Derives the meta-type partition from the model.
 *
 * Strict mode groups by (physical type, exact appearance set). Relaxed mode
 * may additionally merge groups of history-free types when members that have
 * once appeared together keep appearing together afterwards, so that the
 * number at risk in each phase stays determined by earlier level counts.
 * Throws RelaxationError when a merge is possible by appearance but the
 * physical type's law is not history-free.
 */
MetaTypeAssignment derive_meta_types(const PhasedSystem& sys, bool relax_exponential);

}  // namespace pms
