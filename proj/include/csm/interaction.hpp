#pragma once

// Pairwise artifact interactions. For an ordered artifact pair (i, j):
//
//   state       s_i => s_j               share of the time in s_i spent while j is in s_j
//   transition  (s_i,s_i') => (s_j,s_j') share of i's s_i->s_i' moves during which j goes
//                                        s_j->s_j' (or stays in s_j when s_j == s_j')
//   forward     s_i & s_j => (s_j,s_j')  share of j's exits from s_j, taken while i stays
//                                        in s_i, that go to s_j'
//
// Strengths are computed on the projections of the log onto {i}, {j} and
// {i,j}, and are returned as exact integer ratios.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "csm/ingest.hpp"
#include "csm/stats.hpp"

namespace csm {

enum class InteractionKind { state, transition, forward };

std::string_view to_string(InteractionKind kind);
std::optional<InteractionKind> parse_interaction_kind(std::string_view name);

struct InteractionKey {
  InteractionKind kind = InteractionKind::state;
  std::size_t i = 0;  // condition artifact
  std::size_t j = 0;  // consequence artifact
  // state: s_i; transition: s_i -> s_i'; forward: s_i (to == from).
  StateIndex condition_from = 0;
  StateIndex condition_to = 0;
  // state: s_j (to == from); transition: s_j -> s_j'; forward: s_j -> s_j'.
  StateIndex consequence_from = 0;
  StateIndex consequence_to = 0;

  static InteractionKey state(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j);
  static InteractionKey transition(std::size_t i, StateIndex s_i, StateIndex s_i_next, std::size_t j, StateIndex s_j,
                                   StateIndex s_j_next);
  static InteractionKey forward(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j, StateIndex s_j_next);

  /// True when any endpoint is an initial/final marker.
  bool touches_boundary() const;

  auto operator<=>(const InteractionKey&) const = default;
};

/// Throws QueryError unless the key is well formed for `artifacts`.
void validate_key(const InteractionKey& key, std::span<const ArtifactDecl> artifacts);

/// Exact ratio of two non-negative integers; denominator 0 means undefined,
/// which is distinct from a value of 0.
struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  bool defined() const { return denominator != 0; }
  /// NaN when undefined.
  double value() const;

  friend bool operator==(const Ratio& a, const Ratio& b);
};

struct ProbabilityEstimates {
  double p_x = 0.0;
  double p_y = 0.0;
  double p_xy = 0.0;
  /// P(Y|X); equals the interaction strength.
  Ratio confidence;
};

/// Precomputes the statistics of every single-artifact and artifact-pair
/// projection of a log. Immutable after construction; safe to share between
/// threads.
class InteractionEngine {
 public:
  explicit InteractionEngine(const EventLog& log);

  const std::vector<ArtifactDecl>& artifacts() const { return artifacts_; }
  std::size_t artifact_count() const { return artifacts_.size(); }

  Ratio strength(const InteractionKey& key) const;
  Ratio state_strength(const InteractionKey& key) const;
  Ratio transition_strength(const InteractionKey& key) const;
  Ratio forward_strength(const InteractionKey& key) const;

  /// With include_boundary the transition population also counts the moves
  /// out of the initial and into the final state. Throws EmptyLogError when
  /// the log has no time in regular states (state/forward kinds) or no
  /// transitions (transition kind).
  ProbabilityEstimates estimate(const InteractionKey& key, bool include_boundary = false) const;

  /// Share of artifact j's exits from s_j (to regular states) that go to s_j'.
  Ratio forward_baseline(std::size_t j, StateIndex s_j, StateIndex s_j_next) const;

  const LogStatistics& full_statistics() const { return full_; }
  const LogStatistics& artifact_statistics(std::size_t i) const { return single_.at(i); }

  Millis artifact_sojourn(std::size_t i, StateIndex s) const;
  std::uint64_t artifact_frequency(std::size_t i, StateIndex from, StateIndex to) const;
  Millis pair_sojourn(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) const;
  std::uint64_t pair_frequency(std::size_t i, StateIndex s_i, StateIndex s_i_next, std::size_t j, StateIndex s_j,
                               StateIndex s_j_next) const;
  /// Σ over regular s'' of pair_frequency(i, s_i, s_i, j, s_j, s'').
  std::uint64_t forward_exits(std::size_t i, StateIndex s_i, std::size_t j, StateIndex s_j) const;
  /// Σ over regular s'' of artifact_frequency(j, s_j, s'').
  std::uint64_t artifact_exits(std::size_t j, StateIndex s_j) const;
  /// Composite transitions of the full log during which artifact j stays in s_j.
  std::uint64_t stay_count(std::size_t j, StateIndex s_j, bool include_brackets) const;

 private:
  const LogStatistics& pair_statistics(std::size_t i, std::size_t j) const;

  std::vector<ArtifactDecl> artifacts_;
  LogStatistics full_;
  std::vector<LogStatistics> single_;
  std::map<std::pair<std::size_t, std::size_t>, LogStatistics> pairs_;  // keyed (low, high)
  std::vector<std::map<StateIndex, std::uint64_t>> stay_inner_;
  std::vector<std::map<StateIndex, std::uint64_t>> stay_all_;
};

Ratio state_strength(const InteractionKey& key, const EventLog& log);
Ratio transition_strength(const InteractionKey& key, const EventLog& log);
Ratio forward_strength(const InteractionKey& key, const EventLog& log);
ProbabilityEstimates estimate_probabilities(const InteractionKey& key, const EventLog& log,
                                            bool include_boundary = false);

}  // namespace csm
