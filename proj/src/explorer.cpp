#include "csm/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "csm/errors.hpp"

namespace csm {

namespace {

CompositeState one(StateIndex s) { return CompositeState(std::vector<StateIndex>{s}); }

std::pair<double, double> measure_range(Measure m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (m) {
    case Measure::lift:
    case Measure::conviction: return {0.0, inf};
    case Measure::phi: return {-1.0, 1.0};
    default: return {0.0, 1.0};
  }
}

std::string percent(const Ratio& r) {
  if (!r.defined()) return "an undefined share";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * r.value());
  return buf;
}

bool passes(const InteractionRecord& rec, const Query& q) {
  for (const auto& [m, minimum] : q.minimums) {
    const auto& v = rec.measures.get(m);
    if (!v.defined()) return false;
    if (v.finite() && v.value() < minimum) return false;
  }
  return true;
}

}  // namespace

void Query::validate(const std::vector<ArtifactDecl>& artifacts) const {
  if (kinds.empty()) throw QueryError("at least one interaction kind is required");
  for (const auto& [m, minimum] : minimums) {
    const auto [lo, hi] = measure_range(m);
    if (std::isnan(minimum) || minimum < lo || minimum > hi)
      throw QueryError("minimum " + std::string(to_string(m)) + " out of range: " + std::to_string(minimum));
  }
  if (pair) {
    for (const auto* name : {&pair->first, &pair->second}) {
      const bool known =
          std::any_of(artifacts.begin(), artifacts.end(), [&](const ArtifactDecl& a) { return a.name == *name; });
      if (!known) throw QueryError("unknown artifact in pair filter: " + *name);
    }
    if (pair->first == pair->second) throw QueryError("pair filter needs two different artifacts");
  }
}

std::string state_label(const ArtifactDecl& artifact, StateIndex s) {
  return artifact.name + "::" + artifact.state_name(s);
}

std::string condition_label(const InteractionKey& key, const std::vector<ArtifactDecl>& artifacts) {
  const auto& a = artifacts.at(key.i);
  switch (key.kind) {
    case InteractionKind::state: return state_label(a, key.condition_from);
    case InteractionKind::transition:
      return "from " + state_label(a, key.condition_from) + ", to " + state_label(a, key.condition_to);
    case InteractionKind::forward:
      return state_label(a, key.condition_from) + " & " + state_label(artifacts.at(key.j), key.consequence_from);
  }
  return {};
}

std::string consequence_label(const InteractionKey& key, const std::vector<ArtifactDecl>& artifacts) {
  const auto& b = artifacts.at(key.j);
  if (key.consequence_from == key.consequence_to) return state_label(b, key.consequence_from);
  return "from " + state_label(b, key.consequence_from) + ", to " + state_label(b, key.consequence_to);
}

Explorer::Explorer(EventLog log)
    : log_(std::move(log)), model_(discover_model(log_)), annotation_(annotate(model_, log_)), engine_(log_) {
  for (std::size_t i = 0; i < log_.artifacts.size(); ++i) artifact_models_.push_back(artifact_model(model_, i));
}

std::size_t Explorer::artifact_index(std::string_view name) const {
  for (const auto& a : log_.artifacts)
    if (a.name == name) return a.index;
  throw NotFoundError("unknown artifact: " + std::string(name));
}

StateIndex Explorer::state_index(std::size_t artifact, std::string_view name) const {
  const auto& a = log_.artifacts.at(artifact);
  if (name == kInitialMarkerName) return kInitialMarker;
  if (name == kFinalMarkerName) return kFinalMarker;
  if (auto s = a.find_state(name)) return *s;
  throw NotFoundError("unknown state " + std::string(name) + " of artifact " + a.name);
}

std::vector<InteractionKey> Explorer::candidate_keys(InteractionKind kind, std::size_t i, std::size_t j,
                                                     bool include_boundary) const {
  std::vector<InteractionKey> keys;
  const auto& mi = artifact_models_.at(i);
  const auto& mj = artifact_models_.at(j);
  switch (kind) {
    case InteractionKind::state:
      for (const auto& si : mi.states())
        for (const auto& sj : mj.states()) keys.push_back(InteractionKey::state(i, si[0], j, sj[0]));
      break;
    case InteractionKind::transition: {
      std::vector<std::pair<StateIndex, StateIndex>> consequences;
      for (const auto& t : mj.transitions()) consequences.emplace_back(t.from[0], t.to[0]);
      for (const auto& sj : mj.states()) consequences.emplace_back(sj[0], sj[0]);
      if (include_boundary) consequences.emplace_back(kInitialMarker, kInitialMarker);
      for (const auto& t : mi.transitions())
        for (const auto& [from, to] : consequences) {
          auto key = InteractionKey::transition(i, t.from[0], t.to[0], j, from, to);
          if (include_boundary || !key.touches_boundary()) keys.push_back(key);
        }
      break;
    }
    case InteractionKind::forward:
      for (const auto& si : mi.states())
        for (const auto& t : mj.transitions()) {
          if (!t.from.is_regular()) continue;
          auto key = InteractionKey::forward(i, si[0], j, t.from[0], t.to[0]);
          if (include_boundary || !key.touches_boundary()) keys.push_back(key);
        }
      break;
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

InteractionRecord Explorer::record(const InteractionKey& key, bool include_boundary) const {
  InteractionRecord rec;
  rec.key = key;
  rec.estimates = engine_.estimate(key, include_boundary);
  rec.measures = compute_measures(rec.estimates);
  rec.interpretation = interpret(rec);
  return rec;
}

std::string Explorer::interpret(const InteractionRecord& rec) const {
  const auto& k = rec.key;
  const auto& a = log_.artifacts.at(k.i);
  const auto& b = log_.artifacts.at(k.j);
  const std::string conf = percent(rec.estimates.confidence);
  switch (k.kind) {
    case InteractionKind::state:
      return conf + " of the total time spent in " + a.state_name(k.condition_from) + " is spent while being in " +
             b.state_name(k.consequence_from);
    case InteractionKind::transition:
      if (k.consequence_from == k.consequence_to)
        return "Transitions from " + a.state_name(k.condition_from) + " to " + a.state_name(k.condition_to) +
               " occur " + conf + " of the times while being in " + b.state_name(k.consequence_from);
      return "Transitions from " + a.state_name(k.condition_from) + " to " + a.state_name(k.condition_to) +
             " occur " + conf + " of the times together with a transition from " + b.state_name(k.consequence_from) +
             " to " + b.state_name(k.consequence_to);
    case InteractionKind::forward:
      return "A transition from " + b.state_name(k.consequence_from) + " goes " + conf + " of the times to " +
             b.state_name(k.consequence_to) + " while being in " + a.state_name(k.condition_from) + " (compared to " +
             percent(engine_.forward_baseline(k.j, k.consequence_from, k.consequence_to)) + " on average)";
  }
  return {};
}

std::vector<InteractionRecord> Explorer::enumerate(const Query& q) const {
  q.validate(log_.artifacts);
  std::vector<InteractionRecord> out;
  if (q.limit == 0) return out;
  const auto& full = engine_.full_statistics();
  const std::size_t n = log_.artifacts.size();
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  if (q.pair) pair = std::make_pair(artifact_index(q.pair->first), artifact_index(q.pair->second));

  for (auto kind : q.kinds) {
    const bool populated = kind == InteractionKind::transition ? full.transition_count(q.include_boundary) > 0
                                                              : full.regular_time() > 0;
    if (!populated) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (pair && !((pair->first == i && pair->second == j) || (pair->first == j && pair->second == i))) continue;
        for (const auto& key : candidate_keys(kind, i, j, q.include_boundary)) {
          auto rec = record(key, q.include_boundary);
          if (!rec.estimates.confidence.defined() && !q.include_undefined) continue;
          if (passes(rec, q)) out.push_back(std::move(rec));
        }
      }
  }
  sort_records(out, q, log_.artifacts);
  if (out.size() > q.limit) out.resize(q.limit);
  return out;
}

HighlightSet Explorer::highlight(const Anchor& anchor) const {
  if (anchor.artifact >= log_.artifacts.size()) throw NotFoundError("unknown artifact in highlight anchor");
  const std::size_t i = anchor.artifact;
  const auto& mi = artifact_models_[i];
  if (anchor.is_state() ? !mi.contains_state(one(anchor.from))
                        : !mi.contains_transition(one(anchor.from), one(*anchor.to)))
    throw NotFoundError("anchor is not part of the " + log_.artifacts[i].name + " artifact model");

  HighlightSet set{anchor, {}};
  auto add = [&](InteractionKind kind, std::size_t j, StateIndex from, StateIndex to, const InteractionKey& key) {
    const Ratio conf = engine_.strength(key);
    if (conf.numerator <= 0) return;
    const auto e = engine_.estimate(key, key.touches_boundary());
    if (e.p_xy <= 0.0) return;
    set.related.push_back({kind, j, from, to, conf, e.p_xy});
  };

  for (std::size_t j = 0; j < log_.artifacts.size(); ++j) {
    if (j == i) continue;
    if (anchor.is_state()) {
      for (const auto& key : candidate_keys(InteractionKind::state, i, j, false))
        if (key.condition_from == anchor.from)
          add(InteractionKind::state, j, key.consequence_from, key.consequence_from, key);
      for (const auto& key : candidate_keys(InteractionKind::forward, i, j, true))
        if (key.condition_from == anchor.from)
          add(InteractionKind::forward, j, key.consequence_from, key.consequence_to, key);
    } else {
      for (const auto& key : candidate_keys(InteractionKind::transition, i, j, true))
        if (key.condition_from == anchor.from && key.condition_to == *anchor.to)
          add(key.consequence_from == key.consequence_to ? InteractionKind::state : InteractionKind::transition, j,
              key.consequence_from, key.consequence_to, key);
    }
  }
  return set;
}

void sort_records(std::vector<InteractionRecord>& records, const Query& q, const std::vector<ArtifactDecl>& artifacts) {
  struct Keyed {
    std::string kind, a, cond, b, cons;
    InteractionRecord* rec;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(records.size());
  for (auto& r : records)
    keyed.push_back({std::string(to_string(r.key.kind)), artifacts.at(r.key.i).name,
                     condition_label(r.key, artifacts), artifacts.at(r.key.j).name,
                     consequence_label(r.key, artifacts), &r});
  std::sort(keyed.begin(), keyed.end(), [&](const Keyed& x, const Keyed& y) {
    const auto& vx = x.rec->measures.get(q.sort_by);
    const auto& vy = y.rec->measures.get(q.sort_by);
    if (vx != vy) return q.descending ? vx > vy : vx < vy;
    return std::tie(x.kind, x.a, x.cond, x.b, x.cons) < std::tie(y.kind, y.a, y.cond, y.b, y.cons);
  });
  std::vector<InteractionRecord> sorted;
  sorted.reserve(records.size());
  for (auto& k : keyed) sorted.push_back(std::move(*k.rec));
  records = std::move(sorted);
}

std::vector<InteractionRecord> enumerate_interactions(const EventLog& log, const CsmModel& model, const Query& q) {
  if (model.empty() || log.empty()) {
    q.validate(log.artifacts);
    return {};
  }
  return Explorer(log).enumerate(q);
}

std::string interpret(const InteractionRecord& rec, const EventLog& log) { return Explorer(log).interpret(rec); }

HighlightSet highlight(const Anchor& anchor, const EventLog& log) { return Explorer(log).highlight(anchor); }

}  // namespace csm
