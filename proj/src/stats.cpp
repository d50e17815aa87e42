#include "csm/stats.hpp"

#include <set>
#include <stdexcept>

#include "csm/errors.hpp"

namespace csm {

Millis entry_duration(const ExecutionSequence& seq, std::size_t k) {
  if (k >= seq.entries.size())
    throw std::out_of_range("entry " + std::to_string(k) + " of a " + std::to_string(seq.entries.size()) +
                            "-entry sequence");
  if (k + 1 == seq.entries.size()) return 0;
  return seq.entries[k + 1].time - seq.entries[k].time;
}

Millis sojourn(const CompositeState& state, const EventLog& log) {
  Millis total = 0;
  for (const auto& seq : log.sequences) {
    Millis in_trace = 0;
    for (std::size_t k = 0; k < seq.entries.size(); ++k)
      if (seq.entries[k].state == state) in_trace += entry_duration(seq, k);
    total += in_trace * static_cast<Millis>(seq.multiplicity);
  }
  return total;
}

std::uint64_t transition_freq(const CompositeState& from, const CompositeState& to, const EventLog& log) {
  std::uint64_t total = 0;
  for (const auto& seq : log.sequences) {
    std::uint64_t in_trace = 0;
    for (std::size_t k = 0; k + 1 < seq.entries.size(); ++k)
      if (seq.entries[k].state == from && seq.entries[k + 1].state == to) ++in_trace;
    total += in_trace * seq.multiplicity;
  }
  return total;
}

LogStatistics::LogStatistics(const EventLog& log) {
  for (const auto& seq : log.sequences) {
    const auto m = seq.multiplicity;
    traces_ += m;
    const auto& e = seq.entries;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const Millis d = entry_duration(seq, k) * static_cast<Millis>(m);
      sojourn_[e[k].state] += d;
      if (e[k].state.is_regular()) regular_time_ += d;
      if (k + 1 < e.size()) {
        freq_[{e[k].state, e[k + 1].state}] += m;
        all_transitions_ += m;
        if (k > 0 && k + 2 < e.size()) inner_transitions_ += m;
      }
    }
  }
}

Millis LogStatistics::sojourn(const CompositeState& s) const {
  auto it = sojourn_.find(s);
  return it == sojourn_.end() ? 0 : it->second;
}

std::uint64_t LogStatistics::frequency(const CompositeState& from, const CompositeState& to) const {
  auto it = freq_.find(Transition{from, to});
  return it == freq_.end() ? 0 : it->second;
}

Annotation annotate(const CsmModel& model, const EventLog& log) {
  Annotation a;
  for (const auto& s : model.states()) {
    a.sojourn_total[s] = 0;
    a.visiting_traces[s] = 0;
  }
  for (const auto& t : model.transitions()) a.transition_freq[t] = 0;

  for (std::size_t ti = 0; ti < log.sequences.size(); ++ti) {
    const auto& seq = log.sequences[ti];
    const auto& e = seq.entries;
    const auto m = seq.multiplicity;
    a.trace_count += m;
    if (e.empty() || e.front().state != model.initial() || e.back().state != model.final_state())
      throw ConformanceError(ti, "trace is not bracketed by the model's initial and final states");
    std::set<CompositeState> visited;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const auto& s = e[k].state;
      if (s.is_regular()) {
        auto it = a.sojourn_total.find(s);
        if (it == a.sojourn_total.end())
          throw ConformanceError(ti, "state " + describe(s, model.artifacts()) + " is not in the model");
        it->second += entry_duration(seq, k) * static_cast<Millis>(m);
        visited.insert(s);
      }
      if (k + 1 < e.size()) {
        auto it = a.transition_freq.find(Transition{s, e[k + 1].state});
        if (it == a.transition_freq.end())
          throw ConformanceError(ti, "transition " + describe(s, model.artifacts()) + " -> " +
                                         describe(e[k + 1].state, model.artifacts()) + " is not in the model");
        it->second += m;
      }
    }
    for (const auto& s : visited) a.visiting_traces[s] += m;
  }

  for (const auto& [s, total] : a.sojourn_total) {
    const auto visits = a.visiting_traces[s];
    a.sojourn_avg_per_trace[s] = visits ? static_cast<double>(total) / static_cast<double>(visits) : 0.0;
    a.sojourn_avg_all_traces[s] =
        a.trace_count ? static_cast<double>(total) / static_cast<double>(a.trace_count) : 0.0;
  }
  return a;
}

std::vector<std::uint64_t> artifact_coverage(const EventLog& log) {
  std::vector<std::uint64_t> covered(log.artifacts.size(), 0);
  for (const auto& seq : log.sequences) {
    for (std::size_t i = 0; i < covered.size(); ++i) {
      for (const auto& e : seq.entries) {
        if (e.state.is_regular() && e.state[i] != kInitialMarker) {
          covered[i] += seq.multiplicity;
          break;
        }
      }
    }
  }
  return covered;
}

}  // namespace csm
