#pragma once

// Event-log ingestion: CSV rows -> (case, artifact, state, time) events ->
// composite execution sequences -> the model that replays them.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "csm/model.hpp"
#include "csm/timestamp.hpp"

namespace csm {

/// A row whose artifact column is this value closes its case at the row's
/// timestamp instead of changing an artifact state.
inline constexpr std::string_view kCaseEndArtifact = "*";

struct EventRecord {
  std::string case_id;
  std::string artifact;
  std::string state;
  Millis timestamp = 0;
  std::size_t line = 0;  // 1-based source line, 0 when built in memory

  bool closes_case() const { return artifact == kCaseEndArtifact; }
};

enum class UnmatchedPolicy { error, skip };

struct MappingRule {
  std::string pattern;
  std::string artifact;
  /// May reference captures: "$0" is the whole activity, "$1".."$9" groups.
  std::string state;
};

/// Maps activity names to (artifact, state). First matching rule wins; patterns
/// are anchored (they must match the whole activity name).
class MappingConfig {
 public:
  MappingConfig(std::vector<MappingRule> rules, UnmatchedPolicy policy);

  static MappingConfig from_json(const nlohmann::json& doc);
  static MappingConfig load(const std::filesystem::path& path);

  /// nullopt for an unmatched activity under the skip policy; throws
  /// MappingError for an unmatched activity under the error policy.
  std::optional<std::pair<std::string, std::string>> map(const std::string& activity) const;

  const std::vector<MappingRule>& rules() const { return rules_; }
  UnmatchedPolicy unmatched_policy() const { return policy_; }

  /// Artifacts in order of first mention in the rule list.
  std::vector<std::string> artifact_order() const;

 private:
  std::vector<MappingRule> rules_;
  std::vector<std::regex> compiled_;
  UnmatchedPolicy policy_;
};

/// Reads `case_id,artifact,state,timestamp` or `case_id,activity,timestamp`
/// (columns located by header name; extra columns are ignored). The activity
/// form requires `mapping`. Output is grouped by case id (ascending) and sorted
/// by (timestamp, file order) within a case.
std::vector<EventRecord> parse_events(std::istream& in, const MappingConfig* mapping = nullptr);
std::vector<EventRecord> parse_events(const std::filesystem::path& path, const MappingConfig* mapping = nullptr);

/// Declares every artifact that occurs in `events` (mapping rule order first,
/// then first appearance) with its sorted set of observed states.
std::vector<ArtifactDecl> declare_artifacts(const std::vector<EventRecord>& events,
                                            const MappingConfig* mapping = nullptr);

struct StateEntry {
  CompositeState state;
  Millis time = 0;

  bool operator==(const StateEntry&) const = default;
};

struct ExecutionSequence {
  std::vector<StateEntry> entries;
  std::uint64_t multiplicity = 1;

  Millis first_time() const { return entries.front().time; }
  Millis last_time() const { return entries.back().time; }
  Millis span() const { return last_time() - first_time(); }
  std::size_t size() const { return entries.size(); }
};

/// Throws ModelError when `seq` is not a well-formed execution sequence:
/// bracketed by the initial and final states, no repeated consecutive state,
/// non-decreasing times that strictly increase between regular entries.
void validate_sequence(const ExecutionSequence& seq, std::size_t artifact_count);

/// Multiset of distinct execution sequences.
struct EventLog {
  std::vector<ArtifactDecl> artifacts;
  std::vector<ExecutionSequence> sequences;

  /// Multiplicity-weighted number of traces.
  std::uint64_t trace_count() const;
  bool empty() const { return sequences.empty(); }
};

/// Merges sequences whose (state, delay since previous entry) lists agree,
/// summing multiplicities. The first occurrence keeps its absolute times.
std::vector<ExecutionSequence> merge_identical(std::vector<ExecutionSequence> sequences);

EventLog build_sequences(const std::vector<EventRecord>& events, const std::vector<ArtifactDecl>& artifacts);

/// Model whose states and transitions are exactly those observed in `log`.
CsmModel discover_model(const EventLog& log);

ExecutionSequence project_sequence(const ExecutionSequence& seq, const ProjectionIndexSet& idx);
EventLog project_log(const EventLog& log, const ProjectionIndexSet& idx);

/// parse_events + declare_artifacts + build_sequences.
EventLog load_event_log(const std::filesystem::path& path, const MappingConfig* mapping = nullptr);

}  // namespace csm
