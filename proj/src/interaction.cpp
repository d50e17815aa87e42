#include "csm/interaction.hpp"

#include <cmath>
#include <limits>

#include "csm/errors.hpp"

namespace csm {

std::string_view to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::state: return "state";
    case InteractionKind::transition: return "transition";
    case InteractionKind::forward: return "forward";
  }
  return "?";
}

std::optional<InteractionKind> parse_interaction_kind(std::string_view name) {
  if (name == "state") return InteractionKind::state;
  if (name == "transition") return InteractionKind::transition;
  if (name == "forward") return InteractionKind::forward;
  return std::nullopt;
}

InteractionKey InteractionKey::state(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) {
  return {InteractionKind::state, i, j, s_i, s_i, s_j, s_j};
}

InteractionKey InteractionKey::transition(std::size_t i, StateIndex s_i, StateIndex s_i_next, std::size_t j,
                                          StateIndex s_j, StateIndex s_j_next) {
  return {InteractionKind::transition, i, j, s_i, s_i_next, s_j, s_j_next};
}

InteractionKey InteractionKey::forward(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j,
                                       StateIndex s_j_next) {
  return {InteractionKind::forward, i, j, s_i, s_i, s_j, s_j_next};
}

bool InteractionKey::touches_boundary() const {
  return is_marker(condition_from) || is_marker(condition_to) || is_marker(consequence_from) ||
         is_marker(consequence_to);
}

void validate_key(const InteractionKey& key, std::span<const ArtifactDecl> artifacts) {
  auto fail = [](const std::string& why) { throw QueryError("invalid interaction key: " + why); };
  if (key.i >= artifacts.size() || key.j >= artifacts.size()) fail("artifact index out of range");
  if (key.i == key.j) fail("condition and consequence must concern different artifacts");
  auto regular = [&](std::size_t a, StateIndex s) {
    return s >= 0 && static_cast<std::size_t>(s) < artifacts[a].states.size();
  };
  auto extended = [&](std::size_t a, StateIndex s) { return s == kInitialMarker || s == kFinalMarker || regular(a, s); };
  switch (key.kind) {
    case InteractionKind::state:
      if (!regular(key.i, key.condition_from) || !regular(key.j, key.consequence_from))
        fail("state co-occurrence needs regular states");
      if (key.condition_to != key.condition_from || key.consequence_to != key.consequence_from)
        fail("state co-occurrence carries single states");
      break;
    case InteractionKind::transition:
      if (!extended(key.i, key.condition_from) || !extended(key.i, key.condition_to) ||
          !extended(key.j, key.consequence_from) || !extended(key.j, key.consequence_to))
        fail("state index out of range");
      if (key.condition_from == key.condition_to) fail("the condition must be a state change");
      break;
    case InteractionKind::forward:
      if (!regular(key.i, key.condition_from)) fail("forward condition needs a regular state of artifact i");
      if (key.condition_to != key.condition_from) fail("forward condition holds one state of artifact i");
      if (!extended(key.j, key.consequence_from) || !extended(key.j, key.consequence_to))
        fail("state index out of range");
      if (key.consequence_from == key.consequence_to) fail("the consequence must be a state change");
      break;
  }
}

double Ratio::value() const {
  if (!defined()) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

__extension__ using Wide = __int128;

bool operator==(const Ratio& a, const Ratio& b) {
  if (!a.defined() || !b.defined()) return a.defined() == b.defined();
  return static_cast<Wide>(a.numerator) * b.denominator == static_cast<Wide>(b.numerator) * a.denominator;
}

// ---------------------------------------------------------------------------

namespace {

CompositeState one(StateIndex s) { return CompositeState(std::vector<StateIndex>{s}); }

// Slots of the {i,j} projection are ordered by artifact index.
CompositeState two(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) {
  return i < j ? CompositeState(std::vector<StateIndex>{s_i, s_j}) : CompositeState(std::vector<StateIndex>{s_j, s_i});
}

Ratio ratio(std::int64_t num, std::int64_t den) { return Ratio{num, den}; }
Ratio ratio(std::uint64_t num, std::uint64_t den) {
  return Ratio{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

double share(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

InteractionEngine::InteractionEngine(const EventLog& log) : artifacts_(log.artifacts), full_(log) {
  const std::size_t n = artifacts_.size();
  single_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) single_.emplace_back(project_log(log, ProjectionIndexSet::single(i, n)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      pairs_.emplace(std::make_pair(a, b), LogStatistics(project_log(log, ProjectionIndexSet({a, b}, n))));

  stay_inner_.resize(n);
  stay_all_.resize(n);
  for (const auto& [t, count] : full_.frequencies()) {
    const bool bracket = t.from.kind() == StateKind::initial || t.to.kind() == StateKind::final_;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.from[j] != t.to[j]) continue;
      stay_all_[j][t.from[j]] += count;
      if (!bracket) stay_inner_[j][t.from[j]] += count;
    }
  }
}

const LogStatistics& InteractionEngine::pair_statistics(std::size_t i, std::size_t j) const {
  auto it = pairs_.find({std::min(i, j), std::max(i, j)});
  if (it == pairs_.end()) throw QueryError("no statistics for artifact pair");
  return it->second;
}

Millis InteractionEngine::artifact_sojourn(std::size_t i, StateIndex s) const {
  return single_.at(i).sojourn(one(s));
}

std::uint64_t InteractionEngine::artifact_frequency(std::size_t i, StateIndex from, StateIndex to) const {
  return single_.at(i).frequency(one(from), one(to));
}

Millis InteractionEngine::pair_sojourn(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) const {
  return pair_statistics(i, j).sojourn(two(i, s_i, j, s_j));
}

std::uint64_t InteractionEngine::pair_frequency(std::size_t i, StateIndex s_i, StateIndex s_i_next, std::size_t j,
                                                StateIndex s_j, StateIndex s_j_next) const {
  return pair_statistics(i, j).frequency(two(i, s_i, j, s_j), two(i, s_i_next, j, s_j_next));
}

std::uint64_t InteractionEngine::forward_exits(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) const {
  std::uint64_t total = 0;
  const auto count = static_cast<StateIndex>(artifacts_.at(j).states.size());
  for (StateIndex next = 0; next < count; ++next)
    if (next != s_j) total += pair_frequency(i, s_i, s_i, j, s_j, next);
  return total;
}

std::uint64_t InteractionEngine::artifact_exits(std::size_t j, StateIndex s_j) const {
  std::uint64_t total = 0;
  const auto count = static_cast<StateIndex>(artifacts_.at(j).states.size());
  for (StateIndex next = 0; next < count; ++next)
    if (next != s_j) total += artifact_frequency(j, s_j, next);
  return total;
}

std::uint64_t InteractionEngine::stay_count(std::size_t j, StateIndex s_j, bool include_brackets) const {
  const auto& m = (include_brackets ? stay_all_ : stay_inner_).at(j);
  auto it = m.find(s_j);
  return it == m.end() ? 0 : it->second;
}

Ratio InteractionEngine::state_strength(const InteractionKey& k) const {
  return ratio(pair_sojourn(k.i, k.condition_from, k.j, k.consequence_from), artifact_sojourn(k.i, k.condition_from));
}

Ratio InteractionEngine::transition_strength(const InteractionKey& k) const {
  return ratio(pair_frequency(k.i, k.condition_from, k.condition_to, k.j, k.consequence_from, k.consequence_to),
               artifact_frequency(k.i, k.condition_from, k.condition_to));
}

Ratio InteractionEngine::forward_strength(const InteractionKey& k) const {
  return ratio(pair_frequency(k.i, k.condition_from, k.condition_from, k.j, k.consequence_from, k.consequence_to),
               forward_exits(k.i, k.condition_from, k.j, k.consequence_from));
}

Ratio InteractionEngine::strength(const InteractionKey& key) const {
  validate_key(key, artifacts_);
  switch (key.kind) {
    case InteractionKind::state: return state_strength(key);
    case InteractionKind::transition: return transition_strength(key);
    case InteractionKind::forward: return forward_strength(key);
  }
  return {};
}

ProbabilityEstimates InteractionEngine::estimate(const InteractionKey& k, bool include_boundary) const {
  validate_key(k, artifacts_);
  ProbabilityEstimates e;
  switch (k.kind) {
    case InteractionKind::state: {
      const Millis total = full_.regular_time();
      if (total == 0) throw EmptyLogError("the log spends no time in regular states");
      const auto t = static_cast<double>(total);
      e.confidence = state_strength(k);
      e.p_x = static_cast<double>(artifact_sojourn(k.i, k.condition_from)) / t;
      e.p_y = static_cast<double>(artifact_sojourn(k.j, k.consequence_from)) / t;
      e.p_xy = static_cast<double>(e.confidence.numerator) / t;
      break;
    }
    case InteractionKind::transition: {
      const std::uint64_t total = full_.transition_count(include_boundary);
      if (total == 0) throw EmptyLogError("the log has no transitions between regular states");
      const auto t = static_cast<double>(total);
      e.confidence = transition_strength(k);
      e.p_x = static_cast<double>(e.confidence.denominator) / t;
      const std::uint64_t y = k.consequence_from == k.consequence_to
                                  ? stay_count(k.j, k.consequence_from, include_boundary)
                                  : artifact_frequency(k.j, k.consequence_from, k.consequence_to);
      e.p_y = static_cast<double>(y) / t;
      e.p_xy = static_cast<double>(e.confidence.numerator) / t;
      break;
    }
    case InteractionKind::forward: {
      const Millis total = full_.regular_time();
      if (total == 0) throw EmptyLogError("the log spends no time in regular states");
      e.confidence = forward_strength(k);
      const double in_state = static_cast<double>(artifact_sojourn(k.j, k.consequence_from)) / static_cast<double>(total);
      const auto exits = static_cast<double>(artifact_exits(k.j, k.consequence_from));
      e.p_x = in_state * share(static_cast<double>(e.confidence.denominator), exits);
      e.p_y = in_state * share(static_cast<double>(artifact_frequency(k.j, k.consequence_from, k.consequence_to)), exits);
      e.p_xy = in_state * share(static_cast<double>(e.confidence.numerator), exits);
      break;
    }
  }
  return e;
}

Ratio InteractionEngine::forward_baseline(std::size_t j, StateIndex s_j, StateIndex s_j_next) const {
  return ratio(artifact_frequency(j, s_j, s_j_next), artifact_exits(j, s_j));
}

// ---------------------------------------------------------------------------
// Direct evaluation from the definitions, without the precomputed tables.

Ratio state_strength(const InteractionKey& k, const EventLog& log) {
  validate_key(k, log.artifacts);
  const std::size_t n = log.artifacts.size();
  const auto li = project_log(log, ProjectionIndexSet::single(k.i, n));
  const auto lij = project_log(log, ProjectionIndexSet({k.i, k.j}, n));
  return ratio(sojourn(two(k.i, k.condition_from, k.j, k.consequence_from), lij), sojourn(one(k.condition_from), li));
}

Ratio transition_strength(const InteractionKey& k, const EventLog& log) {
  validate_key(k, log.artifacts);
  const std::size_t n = log.artifacts.size();
  const auto li = project_log(log, ProjectionIndexSet::single(k.i, n));
  const auto lij = project_log(log, ProjectionIndexSet({k.i, k.j}, n));
  return ratio(transition_freq(two(k.i, k.condition_from, k.j, k.consequence_from),
                               two(k.i, k.condition_to, k.j, k.consequence_to), lij),
               transition_freq(one(k.condition_from), one(k.condition_to), li));
}

Ratio forward_strength(const InteractionKey& k, const EventLog& log) {
  validate_key(k, log.artifacts);
  const std::size_t n = log.artifacts.size();
  const auto lij = project_log(log, ProjectionIndexSet({k.i, k.j}, n));
  const auto from = two(k.i, k.condition_from, k.j, k.consequence_from);
  std::uint64_t den = 0;
  for (StateIndex next = 0; next < static_cast<StateIndex>(log.artifacts[k.j].states.size()); ++next)
    if (next != k.consequence_from) den += transition_freq(from, two(k.i, k.condition_from, k.j, next), lij);
  return ratio(transition_freq(from, two(k.i, k.condition_from, k.j, k.consequence_to), lij), den);
}

ProbabilityEstimates estimate_probabilities(const InteractionKey& key, const EventLog& log, bool include_boundary) {
  return InteractionEngine(log).estimate(key, include_boundary);
}

}  // namespace csm
