#pragma once

// Sojourn times and transition frequencies over multiset logs. All arithmetic
// is exact: durations in integer milliseconds, frequencies as integer counts.

#include <cstdint>
#include <map>
#include <vector>

#include "csm/ingest.hpp"
#include "csm/model.hpp"

namespace csm {

/// Duration of entry `k` (0-based): time until the next entry, 0 for the last.
/// Throws std::out_of_range for k >= seq.size().
Millis entry_duration(const ExecutionSequence& seq, std::size_t k);

/// Multiplicity-weighted total time spent in `state` over all traces of `log`.
Millis sojourn(const CompositeState& state, const EventLog& log);

/// Multiplicity-weighted number of adjacent (from, to) entry pairs.
std::uint64_t transition_freq(const CompositeState& from, const CompositeState& to, const EventLog& log);

/// One-pass aggregation of every sojourn and frequency in a log.
class LogStatistics {
 public:
  LogStatistics() = default;
  explicit LogStatistics(const EventLog& log);

  Millis sojourn(const CompositeState& s) const;
  std::uint64_t frequency(const CompositeState& from, const CompositeState& to) const;

  const std::map<CompositeState, Millis>& sojourns() const { return sojourn_; }
  const std::map<Transition, std::uint64_t>& frequencies() const { return freq_; }

  /// Total time spent in regular states.
  Millis regular_time() const { return regular_time_; }
  /// Number of transitions; brackets are the transitions leaving the initial
  /// state and entering the final state.
  std::uint64_t transition_count(bool include_brackets) const {
    return include_brackets ? all_transitions_ : inner_transitions_;
  }
  std::uint64_t trace_count() const { return traces_; }

 private:
  std::map<CompositeState, Millis> sojourn_;
  std::map<Transition, std::uint64_t> freq_;
  Millis regular_time_ = 0;
  std::uint64_t all_transitions_ = 0;
  std::uint64_t inner_transitions_ = 0;
  std::uint64_t traces_ = 0;
};

/// Model annotation. Averages are given two ways: over the traces that visit
/// the state at least once, and over all traces of the log.
struct Annotation {
  std::map<CompositeState, Millis> sojourn_total;
  std::map<CompositeState, double> sojourn_avg_per_trace;
  std::map<CompositeState, double> sojourn_avg_all_traces;
  std::map<CompositeState, std::uint64_t> visiting_traces;
  std::map<Transition, std::uint64_t> transition_freq;
  std::uint64_t trace_count = 0;
};

/// Populates every regular state and every transition of `model`. Throws
/// ConformanceError when a trace of `log` does not replay on the model.
Annotation annotate(const CsmModel& model, const EventLog& log);

/// Per artifact, the multiplicity-weighted number of traces in which the
/// artifact leaves its initial marker.
std::vector<std::uint64_t> artifact_coverage(const EventLog& log);

}  // namespace csm
