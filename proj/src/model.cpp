#include "csm/model.hpp"

#include <algorithm>
#include <set>

#include "csm/errors.hpp"

namespace csm {

std::optional<StateIndex> ArtifactDecl::find_state(std::string_view state_name) const {
  auto it = std::lower_bound(states.begin(), states.end(), state_name);
  if (it == states.end() || *it != state_name) return std::nullopt;
  return static_cast<StateIndex>(it - states.begin());
}

std::string ArtifactDecl::state_name(StateIndex s) const {
  if (s == kInitialMarker) return std::string(kInitialMarkerName);
  if (s == kFinalMarker) return std::string(kFinalMarkerName);
  if (s < 0 || static_cast<std::size_t>(s) >= states.size())
    throw ModelError("state index " + std::to_string(s) + " out of range for artifact '" + name + "'");
  return states[static_cast<std::size_t>(s)];
}

void validate_artifacts(std::span<const ArtifactDecl> artifacts) {
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const auto& a = artifacts[i];
    if (a.index != i) throw ModelError("artifact indices must be contiguous from 0");
    if (a.name.empty()) throw ModelError("artifact name must be non-empty");
    if (!names.insert(a.name).second) throw ModelError("duplicate artifact name '" + a.name + "'");
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      if (a.states[k].empty()) throw ModelError("artifact '" + a.name + "' has an empty state name");
      if (k > 0 && !(a.states[k - 1] < a.states[k]))
        throw ModelError("state names of artifact '" + a.name + "' must be sorted and unique");
    }
  }
}

CompositeState CompositeState::initial(std::size_t artifact_count) {
  return CompositeState(std::vector<StateIndex>(artifact_count, kInitialMarker));
}

CompositeState CompositeState::final_state(std::size_t artifact_count) {
  return CompositeState(std::vector<StateIndex>(artifact_count, kFinalMarker));
}

StateKind CompositeState::kind() const {
  if (slots_.empty()) return StateKind::regular;
  if (std::all_of(slots_.begin(), slots_.end(), [](StateIndex s) { return s == kInitialMarker; }))
    return StateKind::initial;
  if (std::all_of(slots_.begin(), slots_.end(), [](StateIndex s) { return s == kFinalMarker; }))
    return StateKind::final_;
  return StateKind::regular;
}

std::string describe(const CompositeState& state, std::span<const ArtifactDecl> artifacts) {
  std::string out = "(";
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += ',';
    out += i < artifacts.size() ? artifacts[i].state_name(state[i]) : std::to_string(state[i]);
  }
  out += ')';
  return out;
}

ProjectionIndexSet::ProjectionIndexSet(std::vector<std::size_t> indices, std::size_t artifact_count)
    : indices_(std::move(indices)) {
  if (indices_.empty()) throw ProjectionError("projection index set must be non-empty");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw ProjectionError("projection index set contains duplicates");
  if (indices_.back() >= artifact_count)
    throw ProjectionError("artifact index " + std::to_string(indices_.back()) + " out of range (" +
                          std::to_string(artifact_count) + " artifacts)");
}

ProjectionIndexSet ProjectionIndexSet::all(std::size_t artifact_count) {
  ProjectionIndexSet s;
  s.indices_.resize(artifact_count);
  for (std::size_t i = 0; i < artifact_count; ++i) s.indices_[i] = i;
  if (s.indices_.empty()) throw ProjectionError("projection index set must be non-empty");
  return s;
}

ProjectionIndexSet ProjectionIndexSet::single(std::size_t index, std::size_t artifact_count) {
  return ProjectionIndexSet({index}, artifact_count);
}

ProjectionIndexSet ProjectionIndexSet::relative_to(const ProjectionIndexSet& outer) const {
  std::vector<std::size_t> rel;
  rel.reserve(indices_.size());
  for (std::size_t idx : indices_) {
    auto it = std::lower_bound(outer.indices_.begin(), outer.indices_.end(), idx);
    if (it == outer.indices_.end() || *it != idx)
      throw ProjectionError("artifact index " + std::to_string(idx) + " is not part of the outer projection");
    rel.push_back(static_cast<std::size_t>(it - outer.indices_.begin()));
  }
  return ProjectionIndexSet(std::move(rel), outer.size());
}

CompositeState project_state(const CompositeState& state, const ProjectionIndexSet& idx) {
  if (idx.indices().back() >= state.size())
    throw ProjectionError("artifact index " + std::to_string(idx.indices().back()) +
                          " out of range for a state with " + std::to_string(state.size()) + " slots");
  std::vector<StateIndex> slots;
  slots.reserve(idx.size());
  for (std::size_t i : idx.indices()) slots.push_back(state[i]);
  return CompositeState(std::move(slots));
}

CsmModel::CsmModel(std::vector<ArtifactDecl> artifacts, std::vector<CompositeState> states,
                   std::vector<Transition> transitions)
    : artifacts_(std::move(artifacts)), states_(std::move(states)), transitions_(std::move(transitions)) {
  std::sort(states_.begin(), states_.end());
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  check_invariants();
}

bool CsmModel::contains_state(const CompositeState& s) const {
  return std::binary_search(states_.begin(), states_.end(), s);
}

bool CsmModel::contains_transition(const CompositeState& from, const CompositeState& to) const {
  return std::binary_search(transitions_.begin(), transitions_.end(), Transition{from, to});
}

bool CsmModel::operator==(const CsmModel& other) const {
  if (artifacts_.size() != other.artifacts_.size()) return false;
  for (std::size_t i = 0; i < artifacts_.size(); ++i) {
    if (artifacts_[i].name != other.artifacts_[i].name || artifacts_[i].states != other.artifacts_[i].states)
      return false;
  }
  return states_ == other.states_ && transitions_ == other.transitions_;
}

void CsmModel::check_invariants() const {
  validate_artifacts(artifacts_);
  const std::size_t n = artifacts_.size();
  auto check_slots = [&](const CompositeState& s) {
    if (s.size() != n) throw ModelError("composite state arity does not match the artifact count");
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] >= 0 && static_cast<std::size_t>(s[i]) >= artifacts_[i].states.size())
        throw ModelError("state slot out of range for artifact '" + artifacts_[i].name + "'");
      if (s[i] < kFinalMarker) throw ModelError("invalid marker value in state slot");
    }
  };
  for (const auto& s : states_) {
    check_slots(s);
    if (!s.is_regular()) throw ModelError("initial/final markers cannot be listed as regular states");
  }
  for (const auto& t : transitions_) {
    check_slots(t.from);
    check_slots(t.to);
    if (t.from == t.to) throw ModelError("self loop on " + describe(t.from, artifacts_));
    if (t.to.kind() == StateKind::initial) throw ModelError("transition into the initial state");
    if (t.from.kind() == StateKind::final_) throw ModelError("transition out of the final state");
    if (t.from.is_regular() && !contains_state(t.from))
      throw ModelError("transition source " + describe(t.from, artifacts_) + " is not a model state");
    if (t.to.is_regular() && !contains_state(t.to))
      throw ModelError("transition target " + describe(t.to, artifacts_) + " is not a model state");
  }
}

std::vector<ArtifactDecl> project_artifacts(std::span<const ArtifactDecl> artifacts,
                                            const ProjectionIndexSet& idx) {
  if (idx.indices().back() >= artifacts.size())
    throw ProjectionError("artifact index " + std::to_string(idx.indices().back()) + " out of range");
  std::vector<ArtifactDecl> out;
  out.reserve(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    ArtifactDecl a = artifacts[idx[j]];
    a.index = j;
    out.push_back(std::move(a));
  }
  return out;
}

CsmModel project_model(const CsmModel& model, const ProjectionIndexSet& idx) {
  auto artifacts = project_artifacts(model.artifacts(), idx);
  std::vector<CompositeState> states;
  states.reserve(model.states().size());
  for (const auto& s : model.states()) {
    auto p = project_state(s, idx);
    // A partially started state may collapse onto the initial marker.
    if (p.is_regular()) states.push_back(std::move(p));
  }
  std::vector<Transition> transitions;
  for (const auto& t : model.transitions()) {
    auto from = project_state(t.from, idx);
    auto to = project_state(t.to, idx);
    if (from != to) transitions.push_back({std::move(from), std::move(to)});
  }
  return CsmModel(std::move(artifacts), std::move(states), std::move(transitions));
}

CsmModel artifact_model(const CsmModel& model, std::size_t artifact) {
  return project_model(model, ProjectionIndexSet::single(artifact, model.artifact_count()));
}

}  // namespace csm
