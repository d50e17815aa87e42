#pragma once

// Enumeration, ranking and filtering of pairwise interactions; textual
// interpretation; click-to-highlight sets.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csm/ingest.hpp"
#include "csm/interaction.hpp"
#include "csm/measures.hpp"
#include "csm/model.hpp"
#include "csm/stats.hpp"

namespace csm {

struct Query {
  std::set<InteractionKind> kinds = {InteractionKind::state, InteractionKind::transition, InteractionKind::forward};
  Measure sort_by = Measure::lift;
  bool descending = true;
  /// Records whose value is undefined or below the minimum are dropped.
  std::map<Measure, double> minimums = {{Measure::support, 0.001}};
  /// Unordered: matches (a,b) and (b,a).
  std::optional<std::pair<std::string, std::string>> pair;
  std::size_t limit = 50;
  bool include_boundary = false;
  bool include_undefined = false;

  /// Throws QueryError on an empty kind set, out-of-range minimum, or a pair
  /// naming an unknown artifact.
  void validate(const std::vector<ArtifactDecl>& artifacts) const;
};

/// "artifact::state"
std::string state_label(const ArtifactDecl& artifact, StateIndex s);
std::string condition_label(const InteractionKey& key, const std::vector<ArtifactDecl>& artifacts);
std::string consequence_label(const InteractionKey& key, const std::vector<ArtifactDecl>& artifacts);

/// A state (to empty) or a transition of one artifact model.
struct Anchor {
  std::size_t artifact = 0;
  StateIndex from = 0;
  std::optional<StateIndex> to;

  bool is_state() const { return !to.has_value(); }
};

struct HighlightElement {
  InteractionKind kind = InteractionKind::state;
  std::size_t artifact = 0;
  /// A state when from == to, otherwise a transition of `artifact`.
  StateIndex from = 0;
  StateIndex to = 0;
  Ratio confidence;
  double support = 0.0;
};

struct HighlightSet {
  Anchor anchor;
  std::vector<HighlightElement> related;
};

/// Read-only view over one log: its model, annotation and interaction tables.
class Explorer {
 public:
  explicit Explorer(EventLog log);

  const EventLog& log() const { return log_; }
  const CsmModel& model() const { return model_; }
  const Annotation& annotation() const { return annotation_; }
  const InteractionEngine& engine() const { return engine_; }
  const std::vector<ArtifactDecl>& artifacts() const { return log_.artifacts; }

  /// Throws NotFoundError.
  std::size_t artifact_index(std::string_view name) const;
  StateIndex state_index(std::size_t artifact, std::string_view name) const;

  std::vector<InteractionRecord> enumerate(const Query& q) const;
  InteractionRecord record(const InteractionKey& key, bool include_boundary = false) const;
  std::string interpret(const InteractionRecord& rec) const;
  /// Throws NotFoundError for an anchor outside the artifact model.
  HighlightSet highlight(const Anchor& anchor) const;

  /// Every key of the given kind for the ordered pair (i, j).
  std::vector<InteractionKey> candidate_keys(InteractionKind kind, std::size_t i, std::size_t j,
                                             bool include_boundary) const;

 private:
  EventLog log_;
  CsmModel model_;
  Annotation annotation_;
  InteractionEngine engine_;
  std::vector<CsmModel> artifact_models_;
};

/// Orders records by q.sort_by, then by the labels of their keys.
void sort_records(std::vector<InteractionRecord>& records, const Query& q, const std::vector<ArtifactDecl>& artifacts);

/// Returns an empty list for an empty model.
std::vector<InteractionRecord> enumerate_interactions(const EventLog& log, const CsmModel& model, const Query& q);
std::string interpret(const InteractionRecord& rec, const EventLog& log);
HighlightSet highlight(const Anchor& anchor, const EventLog& log);

}  // namespace csm
