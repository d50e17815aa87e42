#include "csm/json_io.hpp"

#include <fstream>
#include <map>

#include "csm/errors.hpp"

namespace csm {

namespace {

StateIndex parse_slot(const ArtifactDecl& a, const std::string& name) {
  if (name == kInitialMarkerName) return kInitialMarker;
  if (name == kFinalMarkerName) return kFinalMarker;
  if (auto s = a.find_state(name)) return *s;
  throw ModelError("unknown state '" + name + "' of artifact " + a.name);
}

std::size_t parse_artifact(const std::vector<ArtifactDecl>& artifacts, const std::string& name) {
  for (const auto& a : artifacts)
    if (a.name == name) return a.index;
  throw ModelError("unknown artifact '" + name + "'");
}

Json slots_json(const CompositeState& s, const std::vector<ArtifactDecl>& artifacts) {
  Json slots = Json::array();
  for (std::size_t k = 0; k < s.size(); ++k) slots.push_back(artifacts[k].state_name(s[k]));
  return slots;
}

Json ratio_json(const Ratio& r) { return {{"numerator", r.numerator}, {"denominator", r.denominator}}; }

Ratio ratio_from(const Json& j) { return {j.at("numerator").get<std::int64_t>(), j.at("denominator").get<std::int64_t>()}; }

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

Json measure_to_json(const MeasureValue& v) {
  if (v.finite()) return v.value();
  if (v.infinite()) return "inf";
  return nullptr;
}

MeasureValue measure_from_json(const Json& j) {
  if (j.is_null()) return MeasureValue::undefined();
  if (j.is_number()) return MeasureValue::of(j.get<double>());
  if (j.is_string() && j.get<std::string>() == "inf") return MeasureValue::infinity();
  throw ModelError("measure value must be a number, \"inf\" or null");
}

Json export_model(const CsmModel& model, const Annotation& annotation) {
  const auto& artifacts = model.artifacts();
  Json doc;
  doc["artifacts"] = Json::array();
  for (const auto& a : artifacts) doc["artifacts"].push_back({{"name", a.name}, {"states", a.states}});

  std::map<CompositeState, int> ids;
  doc["states"] = Json::array();
  auto add_state = [&](const CompositeState& s) {
    const int id = static_cast<int>(ids.size());
    ids.emplace(s, id);
    const char* kind = s.kind() == StateKind::initial ? "initial" : s.kind() == StateKind::final_ ? "final" : "regular";
    doc["states"].push_back({{"id", id}, {"slots", slots_json(s, artifacts)}, {"kind", kind}});
  };
  add_state(model.initial());
  for (const auto& s : model.states()) add_state(s);
  add_state(model.final_state());

  doc["transitions"] = Json::array();
  for (const auto& t : model.transitions()) {
    auto it = annotation.transition_freq.find(t);
    const std::uint64_t freq = it == annotation.transition_freq.end() ? 0 : it->second;
    doc["transitions"].push_back({{"from", ids.at(t.from)}, {"to", ids.at(t.to)}, {"freq", freq}});
  }

  doc["sojourn"] = Json::object();
  for (const auto& s : model.states()) {
    auto get = [&](const auto& m) {
      auto it = m.find(s);
      return it == m.end() ? typename std::decay_t<decltype(m)>::mapped_type{} : it->second;
    };
    doc["sojourn"][std::to_string(ids.at(s))] = {
        {"total_ms", get(annotation.sojourn_total)},
        {"avg_per_trace_ms", get(annotation.sojourn_avg_per_trace)},
        {"avg_all_traces_ms", get(annotation.sojourn_avg_all_traces)},
        {"visiting_traces", get(annotation.visiting_traces)},
    };
  }
  doc["trace_count"] = annotation.trace_count;
  doc["averages"] = {{"avg_per_trace_ms", "total over the traces that visit the state"},
                     {"avg_all_traces_ms", "total over all traces"}};
  return doc;
}

std::pair<CsmModel, Annotation> import_model(const Json& doc) {
  return guarded([&] {
    std::vector<ArtifactDecl> artifacts;
    for (const auto& a : doc.at("artifacts"))
      artifacts.push_back({artifacts.size(), a.at("name").get<std::string>(),
                           a.at("states").get<std::vector<std::string>>()});
    validate_artifacts(artifacts);

    std::map<int, CompositeState> by_id;
    std::vector<CompositeState> states;
    for (const auto& s : doc.at("states")) {
      const auto names = s.at("slots").get<std::vector<std::string>>();
      if (names.size() != artifacts.size()) throw ModelError("state arity does not match the artifact count");
      std::vector<StateIndex> slots;
      for (std::size_t k = 0; k < names.size(); ++k) slots.push_back(parse_slot(artifacts[k], names[k]));
      CompositeState cs(std::move(slots));
      if (cs.is_regular()) states.push_back(cs);
      if (!by_id.emplace(s.at("id").get<int>(), cs).second) throw ModelError("duplicate state id");
    }
    auto state_of = [&](const Json& id) {
      auto it = by_id.find(id.get<int>());
      if (it == by_id.end()) throw ModelError("transition references an unknown state id");
      return it->second;
    };

    Annotation ann;
    std::vector<Transition> transitions;
    for (const auto& t : doc.at("transitions")) {
      Transition tr{state_of(t.at("from")), state_of(t.at("to"))};
      ann.transition_freq[tr] = t.at("freq").get<std::uint64_t>();
      transitions.push_back(tr);
    }
    for (const auto& [id, v] : doc.at("sojourn").items()) {
      const auto s = by_id.at(std::stoi(id));
      ann.sojourn_total[s] = v.at("total_ms").get<Millis>();
      ann.sojourn_avg_per_trace[s] = v.at("avg_per_trace_ms").get<double>();
      ann.sojourn_avg_all_traces[s] = v.at("avg_all_traces_ms").get<double>();
      ann.visiting_traces[s] = v.at("visiting_traces").get<std::uint64_t>();
    }
    ann.trace_count = doc.at("trace_count").get<std::uint64_t>();
    return std::make_pair(CsmModel(std::move(artifacts), std::move(states), std::move(transitions)), std::move(ann));
  });
}

Json record_to_json(const InteractionRecord& rec, const std::vector<ArtifactDecl>& artifacts) {
  const auto& k = rec.key;
  const auto& a = artifacts.at(k.i);
  const auto& b = artifacts.at(k.j);
  Json measures = Json::object();
  for (auto m : kAllMeasures) measures[std::string(to_string(m))] = measure_to_json(rec.measures.get(m));
  return {
      {"kind", to_string(k.kind)},
      {"artifact_i", a.name},
      {"artifact_j", b.name},
      {"condition", condition_label(k, artifacts)},
      {"consequence", consequence_label(k, artifacts)},
      {"key",
       {{"condition", {a.state_name(k.condition_from), a.state_name(k.condition_to)}},
        {"consequence", {b.state_name(k.consequence_from), b.state_name(k.consequence_to)}}}},
      {"estimates",
       {{"p_x", rec.estimates.p_x},
        {"p_y", rec.estimates.p_y},
        {"p_xy", rec.estimates.p_xy},
        {"confidence", ratio_json(rec.estimates.confidence)}}},
      {"measures", measures},
      {"interpretation", rec.interpretation},
  };
}

InteractionRecord record_from_json(const Json& j, const std::vector<ArtifactDecl>& artifacts) {
  return guarded([&] {
    InteractionRecord rec;
    auto kind = parse_interaction_kind(j.at("kind").get<std::string>());
    if (!kind) throw ModelError("unknown interaction kind");
    auto& k = rec.key;
    k.kind = *kind;
    k.i = parse_artifact(artifacts, j.at("artifact_i").get<std::string>());
    k.j = parse_artifact(artifacts, j.at("artifact_j").get<std::string>());
    const auto& key = j.at("key");
    k.condition_from = parse_slot(artifacts[k.i], key.at("condition").at(0).get<std::string>());
    k.condition_to = parse_slot(artifacts[k.i], key.at("condition").at(1).get<std::string>());
    k.consequence_from = parse_slot(artifacts[k.j], key.at("consequence").at(0).get<std::string>());
    k.consequence_to = parse_slot(artifacts[k.j], key.at("consequence").at(1).get<std::string>());
    try {
      validate_key(k, artifacts);
    } catch (const QueryError& e) {
      throw ModelError(e.what());
    }
    const auto& e = j.at("estimates");
    rec.estimates.p_x = e.at("p_x").get<double>();
    rec.estimates.p_y = e.at("p_y").get<double>();
    rec.estimates.p_xy = e.at("p_xy").get<double>();
    rec.estimates.confidence = ratio_from(e.at("confidence"));
    const auto& m = j.at("measures");
    rec.measures = {measure_from_json(m.at("confidence")), measure_from_json(m.at("support")),
                    measure_from_json(m.at("lift")),       measure_from_json(m.at("conviction")),
                    measure_from_json(m.at("cosine")),     measure_from_json(m.at("jaccard")),
                    measure_from_json(m.at("phi"))};
    rec.interpretation = j.at("interpretation").get<std::string>();
    return rec;
  });
}

Json export_interactions(const std::vector<InteractionRecord>& records, const std::vector<ArtifactDecl>& artifacts) {
  Json list = Json::array();
  for (const auto& r : records) list.push_back(record_to_json(r, artifacts));
  return {{"records", list}};
}

std::vector<InteractionRecord> import_interactions(const Json& doc, const std::vector<ArtifactDecl>& artifacts) {
  return guarded([&] {
    std::vector<InteractionRecord> out;
    for (const auto& r : doc.at("records")) out.push_back(record_from_json(r, artifacts));
    return out;
  });
}

Json highlight_to_json(const HighlightSet& set, const std::vector<ArtifactDecl>& artifacts) {
  const auto& a = artifacts.at(set.anchor.artifact);
  Json anchor = {{"artifact", a.name}};
  if (set.anchor.is_state()) {
    anchor["state"] = a.state_name(set.anchor.from);
  } else {
    anchor["from"] = a.state_name(set.anchor.from);
    anchor["to"] = a.state_name(*set.anchor.to);
  }
  Json related = Json::array();
  for (const auto& el : set.related) {
    const auto& b = artifacts.at(el.artifact);
    Json item = {{"kind", to_string(el.kind)}, {"artifact", b.name}};
    if (el.kind == InteractionKind::state) {
      item["state"] = b.state_name(el.from);
    } else {
      item["from"] = b.state_name(el.from);
      item["to"] = b.state_name(el.to);
    }
    item["confidence"] = el.confidence.value();
    item["confidence_ratio"] = ratio_json(el.confidence);
    item["support"] = el.support;
    related.push_back(std::move(item));
  }
  return {{"anchor", anchor}, {"related", related}};
}

void write_json(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("error while writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace csm
