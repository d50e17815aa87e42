#pragma once

// Composite state machines over several artifacts, and their projections.
//
// A composite state is a vector with one slot per artifact. Each slot holds an
// index into that artifact's state list, or one of the two artificial markers
// that bracket every execution: kInitialMarker (before anything is known) and
// kFinalMarker (after the case is closed).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csm {

using StateIndex = std::int32_t;

inline constexpr StateIndex kInitialMarker = -1;
inline constexpr StateIndex kFinalMarker = -2;

inline constexpr std::string_view kInitialMarkerName = "⊥";
inline constexpr std::string_view kFinalMarkerName = "⊤";

inline bool is_marker(StateIndex s) { return s < 0; }

struct ArtifactDecl {
  std::size_t index = 0;
  std::string name;
  /// Sorted, unique, non-empty names. Position in this list is the StateIndex.
  std::vector<std::string> states;

  std::optional<StateIndex> find_state(std::string_view state_name) const;
  /// Name of a state slot value, including the two marker names.
  std::string state_name(StateIndex s) const;
};

/// Throws ModelError if indices are not 0..n-1 or state names are empty/duplicated.
void validate_artifacts(std::span<const ArtifactDecl> artifacts);

enum class StateKind { regular, initial, final_ };

class CompositeState {
 public:
  CompositeState() = default;
  explicit CompositeState(std::vector<StateIndex> slots) : slots_(std::move(slots)) {}

  static CompositeState initial(std::size_t artifact_count);
  static CompositeState final_state(std::size_t artifact_count);

  std::span<const StateIndex> slots() const { return slots_; }
  StateIndex operator[](std::size_t i) const { return slots_[i]; }
  std::size_t size() const { return slots_.size(); }

  /// All-initial-marker is the initial state, all-final-marker the final one;
  /// anything else (including partially started vectors) is regular.
  StateKind kind() const;
  bool is_regular() const { return kind() == StateKind::regular; }

  auto operator<=>(const CompositeState&) const = default;

 private:
  std::vector<StateIndex> slots_;
};

struct Transition {
  CompositeState from;
  CompositeState to;

  auto operator<=>(const Transition&) const = default;
};

/// Renders "(W,A)" style labels using artifact state names.
std::string describe(const CompositeState& state, std::span<const ArtifactDecl> artifacts);

/// Strictly increasing, non-empty list of artifact indices.
class ProjectionIndexSet {
 public:
  /// Sorts and validates; throws ProjectionError on empty sets, duplicates, or
  /// indices >= artifact_count.
  ProjectionIndexSet(std::vector<std::size_t> indices, std::size_t artifact_count);

  static ProjectionIndexSet all(std::size_t artifact_count);
  static ProjectionIndexSet single(std::size_t index, std::size_t artifact_count);

  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t operator[](std::size_t j) const { return indices_[j]; }

  /// Re-expresses this set (given in absolute indices) relative to `outer`,
  /// so that projecting a projection on `outer` with the result equals a
  /// direct projection with *this. Throws ProjectionError unless *this ⊆ outer.
  ProjectionIndexSet relative_to(const ProjectionIndexSet& outer) const;

  bool operator==(const ProjectionIndexSet&) const = default;

 private:
  ProjectionIndexSet() = default;
  std::vector<std::size_t> indices_;
};

CompositeState project_state(const CompositeState& state, const ProjectionIndexSet& idx);

/// Immutable after construction.
class CsmModel {
 public:
  CsmModel() = default;

  /// `states` holds regular states only; duplicates are merged. Transitions may
  /// start at the initial state and end at the final state. Throws ModelError
  /// when an invariant is violated (self loop, edge into the initial state or
  /// out of the final state, dangling endpoint, arity mismatch).
  CsmModel(std::vector<ArtifactDecl> artifacts, std::vector<CompositeState> states,
           std::vector<Transition> transitions);

  const std::vector<ArtifactDecl>& artifacts() const { return artifacts_; }
  std::size_t artifact_count() const { return artifacts_.size(); }
  const std::vector<CompositeState>& states() const { return states_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  CompositeState initial() const { return CompositeState::initial(artifacts_.size()); }
  CompositeState final_state() const { return CompositeState::final_state(artifacts_.size()); }

  bool contains_state(const CompositeState& s) const;
  bool contains_transition(const CompositeState& from, const CompositeState& to) const;
  bool empty() const { return states_.empty(); }

  bool operator==(const CsmModel& other) const;

 private:
  void check_invariants() const;

  std::vector<ArtifactDecl> artifacts_;
  std::vector<CompositeState> states_;
  std::vector<Transition> transitions_;
};

CsmModel project_model(const CsmModel& model, const ProjectionIndexSet& idx);
CsmModel artifact_model(const CsmModel& model, std::size_t artifact);

/// Artifact declarations restricted to `idx`, re-indexed 0..m-1.
std::vector<ArtifactDecl> project_artifacts(std::span<const ArtifactDecl> artifacts,
                                            const ProjectionIndexSet& idx);

}  // namespace csm
