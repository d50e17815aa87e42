#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "csm/timestamp.hpp"

#ifndef CSM_FIXTURE_DIR
#error "CSM_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace csm::testing {

namespace {

const Millis kEpoch = parse_iso8601("2017-01-01");

std::string case_name(std::size_t k) {
  std::string digits = std::to_string(k);
  return "case" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

}  // namespace

std::filesystem::path fixture_path(const std::string& name) { return std::filesystem::path(CSM_FIXTURE_DIR) / name; }

EventLog single_trace_log() { return load_event_log(fixture_path("single_trace.csv")); }

std::vector<Variant> running_example_variants() {
  // Durations per composite state; (W,C) lasts 4 days and (Y,C) 2 days everywhere.
  const std::map<std::string, int> days = {{"WA", 4}, {"WB", 2}, {"WC", 4}, {"WD", 1}, {"XD", 2},
                                           {"YD", 4}, {"YE", 3}, {"YB", 3}, {"YC", 2}, {"ZD", 1},
                                           {"WE", 2}, {"YA", 3}, {"XE", 2}};
  auto make = [&](std::initializer_list<const char*> path, std::uint64_t count) {
    Variant v;
    v.count = count;
    for (const char* s : path) {
      v.states.emplace_back(std::string(1, s[0]), std::string(1, s[1]));
      v.days.push_back(days.at(s));
    }
    return v;
  };
  return {
      make({"WA", "WB", "WC", "WD", "XD", "YD", "YE", "YB", "YC", "ZD"}, 20),
      make({"WA", "WB", "WC", "WD", "XD", "YD", "YE", "YB", "YC", "YD", "ZD"}, 40),
      make({"WA", "WB", "WC", "WD", "XD", "YD", "YE", "YB", "YC", "YE", "YB", "YC", "YD", "ZD"}, 10),
      make({"WA", "WB", "WC", "WE", "WB", "WC", "WD", "XD", "YD", "ZD"}, 10),
      make({"WA", "YA", "YB", "YC", "YD", "ZD"}, 10),
      make({"WA", "WB", "WC", "WD", "XD", "XE", "YE", "YB", "YC", "YD", "ZD"}, 10),
      make({"WA", "WB", "WC", "WD", "XD", "YD", "ZD"}, 10),
  };
}

std::vector<EventRecord> variant_events(const std::vector<Variant>& variants) {
  std::vector<EventRecord> events;
  std::size_t case_no = 0;
  for (const auto& v : variants) {
    for (std::uint64_t copy = 0; copy < v.count; ++copy) {
      const std::string id = case_name(case_no++);
      Millis t = kEpoch;
      std::string patient, lab;
      for (std::size_t k = 0; k < v.states.size(); ++k) {
        const auto& [p, l] = v.states[k];
        if (p != patient) events.push_back({id, "patient", p, t, 0});
        if (l != lab) events.push_back({id, "lab", l, t, 0});
        patient = p;
        lab = l;
        t += v.days[k] * kDay;
      }
      events.push_back({id, std::string(kCaseEndArtifact), "", t, 0});
    }
  }
  return events;
}

EventLog running_example_log() { return log_from_events(variant_events(running_example_variants())); }

std::vector<EventRecord> random_events(std::mt19937_64& rng, const RandomLogOptions& opts) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t n = pick(2, opts.max_artifacts);
  std::vector<std::size_t> state_count(n);
  for (auto& c : state_count) c = pick(1, opts.max_states);
  const std::size_t traces = pick(1, opts.max_traces);

  std::vector<std::vector<EventRecord>> cases;
  for (std::size_t c = 0; c < traces; ++c) {
    const std::string id = case_name(c);
    std::vector<EventRecord> evs;
    if (!cases.empty() && pick(0, 9) < 3) {
      // Same behaviour shifted in time; merges with its original.
      const auto& src = cases[pick(0, cases.size() - 1)];
      const Millis shift = static_cast<Millis>(pick(0, 20)) * kDay;
      for (auto e : src) {
        e.case_id = id;
        e.timestamp += shift;
        evs.push_back(e);
      }
      cases.push_back(std::move(evs));
      continue;
    }
    Millis t = kEpoch + static_cast<Millis>(pick(0, 30)) * kDay;
    const std::size_t steps = pick(1, opts.max_steps);
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<std::size_t> who;
      for (std::size_t a = 0; a < n; ++a)
        if ((opts.strict && s == 0) || pick(0, 2) == 0) who.push_back(a);
      if (who.empty()) who.push_back(pick(0, n - 1));
      for (auto a : who)
        evs.push_back({id, "art" + std::to_string(a), "s" + std::to_string(pick(0, state_count[a] - 1)), t, 0});
      t += static_cast<Millis>(pick(1, 4)) * kDay;
    }
    // The case closes at the last event or a few days later.
    const Millis last = evs.back().timestamp;
    if (pick(0, 1) == 0) evs.push_back({id, std::string(kCaseEndArtifact), "", last + static_cast<Millis>(pick(0, 3)) * kDay, 0});
    cases.push_back(std::move(evs));
  }
  std::vector<EventRecord> events;
  for (auto& c : cases) events.insert(events.end(), c.begin(), c.end());
  return events;
}

EventLog log_from_events(const std::vector<EventRecord>& events) {
  return build_sequences(events, declare_artifacts(events));
}

std::string to_csv(const std::vector<EventRecord>& events) {
  std::ostringstream out;
  out << "case_id,artifact,state,timestamp\n";
  for (const auto& e : events) out << e.case_id << ',' << e.artifact << ',' << e.state << ',' << format_iso8601(e.timestamp) << '\n';
  return out.str();
}

std::vector<std::vector<EventRecord>> random_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<EventRecord>> corpus;
  corpus.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RandomLogOptions opts;
    opts.strict = k % 2 == 1;
    corpus.push_back(random_events(rng, opts));
  }
  return corpus;
}

}  // namespace csm::testing
