#include "csm/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "csm/errors.hpp"

namespace csm {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// RFC 4180 fields on a single line; quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty() && !was_quoted) {
      field.clear();
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

std::string substitute_captures(const std::string& tmpl, const std::smatch& m) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && std::isdigit(static_cast<unsigned char>(tmpl[i + 1]))) {
      const auto group = static_cast<std::size_t>(tmpl[i + 1] - '0');
      if (group < m.size()) out += m[group].str();
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

struct Columns {
  std::size_t case_id = 0, timestamp = 0, artifact = 0, state = 0, activity = 0;
  bool activity_form = false;
  std::size_t width = 0;
};

Columns locate_columns(const std::vector<std::string>& header, bool have_mapping) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) pos.emplace(lower(header[i]), i);
  auto col = [&](const char* name) -> std::optional<std::size_t> {
    auto it = pos.find(name);
    if (it == pos.end()) return std::nullopt;
    return it->second;
  };
  Columns c;
  auto case_id = col("case_id");
  auto timestamp = col("timestamp");
  if (!case_id || !timestamp) throw ParseError(1, "header must contain case_id and timestamp columns");
  c.case_id = *case_id;
  c.timestamp = *timestamp;
  if (auto artifact = col("artifact"), state = col("state"); artifact && state) {
    c.artifact = *artifact;
    c.state = *state;
  } else if (auto activity = col("activity")) {
    if (!have_mapping) throw MappingError("an activity-form log (case_id,activity,timestamp) requires a mapping config");
    c.activity = *activity;
    c.activity_form = true;
  } else {
    throw ParseError(1, "header must contain either artifact,state or activity columns");
  }
  c.width = header.size();
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// MappingConfig

MappingConfig::MappingConfig(std::vector<MappingRule> rules, UnmatchedPolicy policy)
    : rules_(std::move(rules)), policy_(policy) {
  if (rules_.empty()) throw MappingError("mapping config needs at least one rule");
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    if (r.artifact.empty() || r.state.empty())
      throw MappingError("mapping rule '" + r.pattern + "' needs a non-empty artifact and state");
    try {
      compiled_.emplace_back(r.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw MappingError("invalid pattern '" + r.pattern + "': " + e.what());
    }
  }
}

MappingConfig MappingConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
    throw MappingError("mapping config must be an object with a \"rules\" array");
  std::vector<MappingRule> rules;
  for (const auto& r : doc["rules"]) {
    if (!r.is_object() || !r.contains("pattern") || !r.contains("artifact") || !r.contains("state") ||
        !r["pattern"].is_string() || !r["artifact"].is_string() || !r["state"].is_string())
      throw MappingError("each mapping rule needs string fields pattern, artifact and state");
    rules.push_back({r["pattern"].get<std::string>(), r["artifact"].get<std::string>(), r["state"].get<std::string>()});
  }
  UnmatchedPolicy policy = UnmatchedPolicy::error;
  if (doc.contains("unmatched_policy")) {
    const auto& p = doc["unmatched_policy"];
    if (p == "error")
      policy = UnmatchedPolicy::error;
    else if (p == "skip")
      policy = UnmatchedPolicy::skip;
    else
      throw MappingError("unmatched_policy must be \"error\" or \"skip\"");
  }
  return MappingConfig(std::move(rules), policy);
}

MappingConfig MappingConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read mapping config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw MappingError("mapping config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

std::optional<std::pair<std::string, std::string>> MappingConfig::map(const std::string& activity) const {
  std::smatch m;
  for (std::size_t k = 0; k < rules_.size(); ++k) {
    if (std::regex_match(activity, m, compiled_[k])) {
      std::string state = substitute_captures(rules_[k].state, m);
      if (state.empty()) throw MappingError("rule '" + rules_[k].pattern + "' maps '" + activity + "' to an empty state");
      return std::make_pair(rules_[k].artifact, std::move(state));
    }
  }
  if (policy_ == UnmatchedPolicy::error) throw MappingError("no mapping rule matches activity '" + activity + "'");
  return std::nullopt;
}

std::vector<std::string> MappingConfig::artifact_order() const {
  std::vector<std::string> order;
  for (const auto& r : rules_) {
    if (r.artifact != kCaseEndArtifact && std::find(order.begin(), order.end(), r.artifact) == order.end())
      order.push_back(r.artifact);
  }
  return order;
}

// ---------------------------------------------------------------------------
// Parsing

std::vector<EventRecord> parse_events(std::istream& in, const MappingConfig* mapping) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Columns> cols;
  std::vector<EventRecord> events;
  std::unordered_map<std::string, std::optional<std::pair<std::string, std::string>>> mapped;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (!cols) {
      cols = locate_columns(fields, mapping != nullptr);
      continue;
    }
    if (fields.size() != cols->width)
      throw ParseError(line_no, "expected " + std::to_string(cols->width) + " fields, found " +
                                    std::to_string(fields.size()));

    EventRecord ev;
    ev.line = line_no;
    ev.case_id = fields[cols->case_id];
    if (ev.case_id.empty()) throw ParseError(line_no, "empty case_id");
    try {
      ev.timestamp = parse_iso8601(fields[cols->timestamp]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    if (cols->activity_form) {
      const std::string& activity = fields[cols->activity];
      if (activity.empty()) throw ParseError(line_no, "empty activity");
      auto it = mapped.find(activity);
      if (it == mapped.end()) it = mapped.emplace(activity, mapping->map(activity)).first;
      if (!it->second) continue;
      ev.artifact = it->second->first;
      ev.state = it->second->second;
    } else {
      ev.artifact = fields[cols->artifact];
      ev.state = fields[cols->state];
      if (ev.artifact.empty()) throw ParseError(line_no, "empty artifact");
      if (ev.state.empty() && !ev.closes_case()) throw ParseError(line_no, "empty state");
    }
    if (ev.state == kInitialMarkerName || ev.state == kFinalMarkerName)
      throw ParseError(line_no, "state name '" + ev.state + "' is reserved");
    events.push_back(std::move(ev));
  }
  if (in.bad()) throw IoError("error while reading event log");
  if (!cols) throw ParseError(1, "missing header row");

  std::stable_sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    return a.timestamp < b.timestamp;
  });
  return events;
}

std::vector<EventRecord> parse_events(const std::filesystem::path& path, const MappingConfig* mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read event log " + path.string());
  return parse_events(in, mapping);
}

std::vector<ArtifactDecl> declare_artifacts(const std::vector<EventRecord>& events, const MappingConfig* mapping) {
  std::vector<std::string> order;
  std::map<std::string, std::set<std::string>> states;
  for (const auto& ev : events) {
    if (ev.closes_case()) continue;
    auto [it, inserted] = states.try_emplace(ev.artifact);
    if (inserted) order.push_back(ev.artifact);
    it->second.insert(ev.state);
  }
  if (mapping) {
    std::vector<std::string> preferred;
    for (const auto& name : mapping->artifact_order())
      if (states.count(name)) preferred.push_back(name);
    for (const auto& name : order)
      if (std::find(preferred.begin(), preferred.end(), name) == preferred.end()) preferred.push_back(name);
    order = std::move(preferred);
  }
  std::vector<ArtifactDecl> decls;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& s = states[order[i]];
    decls.push_back({i, order[i], std::vector<std::string>(s.begin(), s.end())});
  }
  return decls;
}

// ---------------------------------------------------------------------------
// Sequences

std::uint64_t EventLog::trace_count() const {
  std::uint64_t n = 0;
  for (const auto& s : sequences) n += s.multiplicity;
  return n;
}

void validate_sequence(const ExecutionSequence& seq, std::size_t artifact_count) {
  const auto& e = seq.entries;
  if (e.size() < 2) throw ModelError("execution sequence needs at least the initial and final entries");
  if (seq.multiplicity == 0) throw ModelError("execution sequence multiplicity must be positive");
  if (e.front().state.kind() != StateKind::initial) throw ModelError("sequence does not start in the initial state");
  if (e.back().state.kind() != StateKind::final_) throw ModelError("sequence does not end in the final state");
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k].state.size() != artifact_count) throw ModelError("state arity does not match the artifact count");
    if (k > 0 && k + 1 < e.size() && !e[k].state.is_regular())
      throw ModelError("interior entry " + std::to_string(k) + " is not a regular state");
    if (k + 1 < e.size()) {
      if (e[k].state == e[k + 1].state) throw ModelError("repeated consecutive state at entry " + std::to_string(k));
      if (e[k + 1].time < e[k].time) throw ModelError("time decreases at entry " + std::to_string(k + 1));
      if (k >= 1 && k + 2 < e.size() && !(e[k].time < e[k + 1].time))
        throw ModelError("regular entries " + std::to_string(k) + " and " + std::to_string(k + 1) +
                         " share a timestamp");
    }
  }
}

namespace {

using TraceKey = std::vector<std::pair<CompositeState, Millis>>;

TraceKey trace_key(const ExecutionSequence& seq) {
  TraceKey key;
  key.reserve(seq.entries.size());
  Millis prev = seq.entries.empty() ? 0 : seq.entries.front().time;
  for (const auto& e : seq.entries) {
    key.emplace_back(e.state, e.time - prev);
    prev = e.time;
  }
  return key;
}

void append_entry(ExecutionSequence& seq, CompositeState state, Millis time) {
  if (!seq.entries.empty() && seq.entries.back().state == state) return;
  seq.entries.push_back({std::move(state), time});
}

}  // namespace

std::vector<ExecutionSequence> merge_identical(std::vector<ExecutionSequence> sequences) {
  std::map<TraceKey, std::size_t> seen;
  std::vector<ExecutionSequence> out;
  out.reserve(sequences.size());
  for (auto& seq : sequences) {
    auto [it, inserted] = seen.try_emplace(trace_key(seq), out.size());
    if (inserted)
      out.push_back(std::move(seq));
    else
      out[it->second].multiplicity += seq.multiplicity;
  }
  return out;
}

EventLog build_sequences(const std::vector<EventRecord>& events, const std::vector<ArtifactDecl>& artifacts) {
  validate_artifacts(artifacts);
  const std::size_t n = artifacts.size();
  std::map<std::string, std::size_t, std::less<>> artifact_index;
  for (const auto& a : artifacts) artifact_index.emplace(a.name, a.index);

  std::vector<ExecutionSequence> traces;
  std::vector<std::uint64_t> missing(n, 0);
  std::size_t cases = 0;

  for (std::size_t begin = 0; begin < events.size();) {
    std::size_t end = begin;
    while (end < events.size() && events[end].case_id == events[begin].case_id) ++end;
    const std::string& case_id = events[begin].case_id;
    ++cases;

    Millis close_time = events[begin].timestamp;
    std::vector<const EventRecord*> changes;
    for (std::size_t k = begin; k < end; ++k) {
      close_time = std::max(close_time, events[k].timestamp);
      if (!events[k].closes_case()) changes.push_back(&events[k]);
      if (k > begin && events[k].timestamp < events[k - 1].timestamp)
        throw Error("events of case '" + case_id + "' are not sorted by timestamp");
    }
    if (changes.empty()) {
      spdlog::warn("case '{}' has no state events; skipped", case_id);
      begin = end;
      continue;
    }

    ExecutionSequence seq;
    std::vector<StateIndex> slots(n, kInitialMarker);
    std::vector<bool> seen(n, false);
    seq.entries.push_back({CompositeState::initial(n), changes.front()->timestamp});
    for (std::size_t g = 0; g < changes.size();) {
      const Millis t = changes[g]->timestamp;
      std::vector<StateIndex> assigned(n, kInitialMarker);
      for (; g < changes.size() && changes[g]->timestamp == t; ++g) {
        const EventRecord& ev = *changes[g];
        auto ai = artifact_index.find(ev.artifact);
        if (ai == artifact_index.end())
          throw ModelError("line " + std::to_string(ev.line) + ": undeclared artifact '" + ev.artifact + "'");
        const std::size_t a = ai->second;
        auto s = artifacts[a].find_state(ev.state);
        if (!s)
          throw ModelError("line " + std::to_string(ev.line) + ": undeclared state '" + ev.state + "' of artifact '" +
                           ev.artifact + "'");
        if (assigned[a] != kInitialMarker && assigned[a] != *s)
          throw ConflictError("case '" + case_id + "' assigns two states to artifact '" + ev.artifact + "' at " +
                              format_iso8601(t));
        assigned[a] = *s;
        slots[a] = *s;
        seen[a] = true;
      }
      append_entry(seq, CompositeState(slots), t);
    }
    append_entry(seq, CompositeState::final_state(n), close_time);
    for (std::size_t a = 0; a < n; ++a)
      if (!seen[a]) ++missing[a];
    traces.push_back(std::move(seq));
    begin = end;
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (missing[a])
      spdlog::warn("artifact '{}' has no events in {} of {} cases; its slot stays at the initial marker there",
                   artifacts[a].name, missing[a], cases);
  }
  return EventLog{artifacts, merge_identical(std::move(traces))};
}

CsmModel discover_model(const EventLog& log) {
  if (log.empty()) throw EmptyLogError("cannot discover a model from an empty log");
  std::set<CompositeState> states;
  std::set<Transition> transitions;
  for (const auto& seq : log.sequences) {
    for (std::size_t k = 0; k < seq.entries.size(); ++k) {
      const auto& s = seq.entries[k].state;
      if (s.is_regular()) states.insert(s);
      if (k + 1 < seq.entries.size()) transitions.insert({s, seq.entries[k + 1].state});
    }
  }
  return CsmModel(log.artifacts, {states.begin(), states.end()}, {transitions.begin(), transitions.end()});
}

ExecutionSequence project_sequence(const ExecutionSequence& seq, const ProjectionIndexSet& idx) {
  ExecutionSequence out;
  out.multiplicity = seq.multiplicity;
  out.entries.reserve(seq.entries.size());
  for (const auto& e : seq.entries) append_entry(out, project_state(e.state, idx), e.time);
  return out;
}

EventLog project_log(const EventLog& log, const ProjectionIndexSet& idx) {
  std::vector<ExecutionSequence> projected;
  projected.reserve(log.sequences.size());
  for (const auto& seq : log.sequences) projected.push_back(project_sequence(seq, idx));
  return EventLog{project_artifacts(log.artifacts, idx), merge_identical(std::move(projected))};
}

EventLog load_event_log(const std::filesystem::path& path, const MappingConfig* mapping) {
  auto events = parse_events(path, mapping);
  auto artifacts = declare_artifacts(events, mapping);
  return build_sequences(events, artifacts);
}

}  // namespace csm
