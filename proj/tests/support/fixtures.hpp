#pragma once

// Logs used across the test suites: the single two-artifact trace, the running
// example with its artifact-pair frequencies, and random small logs.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "csm/ingest.hpp"

namespace csm::testing {

inline constexpr Millis kDay = kMillisPerDay;

std::filesystem::path fixture_path(const std::string& name);

/// tests/fixtures/single_trace.csv
EventLog single_trace_log();

/// One trace shape of the running example: composite (patient, lab) states
/// with their durations in days, repeated `count` times.
struct Variant {
  std::vector<std::pair<std::string, std::string>> states;
  std::vector<int> days;
  std::uint64_t count = 1;
};

std::vector<Variant> running_example_variants();
std::vector<EventRecord> variant_events(const std::vector<Variant>& variants);
EventLog running_example_log();

struct RandomLogOptions {
  std::size_t max_artifacts = 4;
  std::size_t max_states = 6;
  std::size_t max_traces = 20;
  std::size_t max_steps = 8;
  /// Every artifact gets its first event at the first timestamp of its case,
  /// so no regular composite state keeps an initial marker.
  bool strict = false;
};

/// Events with integer-day timestamps, sorted by (case, time) like parse_events output.
std::vector<EventRecord> random_events(std::mt19937_64& rng, const RandomLogOptions& opts);

/// declare_artifacts + build_sequences.
EventLog log_from_events(const std::vector<EventRecord>& events);

std::string to_csv(const std::vector<EventRecord>& events);

/// Deterministic corpus of `count` random event lists; every other one strict.
std::vector<std::vector<EventRecord>> random_corpus(std::size_t count, std::uint64_t seed);

}  // namespace csm::testing
