#include "doctest.h"

#include <sstream>

#include "csm/errors.hpp"
#include "csm/ingest.hpp"
#include "csm/stats.hpp"
#include "fixtures.hpp"

using namespace csm;
using testing::kDay;

namespace {

std::vector<EventRecord> parse(const std::string& csv, const MappingConfig* mapping = nullptr) {
  std::istringstream in(csv);
  return parse_events(in, mapping);
}

EventLog load_csv(const std::string& csv, const MappingConfig* mapping = nullptr) {
  const auto events = parse(csv, mapping);
  return build_sequences(events, declare_artifacts(events, mapping));
}

std::vector<Millis> durations(const ExecutionSequence& seq) {
  std::vector<Millis> out;
  for (std::size_t k = 0; k < seq.size(); ++k) out.push_back(entry_duration(seq, k) / kDay);
  return out;
}

MappingConfig mapping_from(const std::string& text) { return MappingConfig::from_json(nlohmann::json::parse(text)); }

}  // namespace

TEST_CASE("single-trace sequence and its projections") {
  const auto log = testing::single_trace_log();
  REQUIRE(log.sequences.size() == 1);
  const auto& seq = log.sequences[0];
  CHECK(durations(seq) == std::vector<Millis>{0, 4, 2, 4, 1, 2, 4, 3, 3, 2, 1, 0});
  CHECK(describe(seq.entries[5].state, log.artifacts) == "(X,D)");
  CHECK(seq.span() == 26 * kDay);

  const auto p0 = project_sequence(seq, ProjectionIndexSet::single(0, 2));
  CHECK(durations(p0) == std::vector<Millis>{0, 11, 2, 12, 1, 0});
  const auto p1 = project_sequence(seq, ProjectionIndexSet::single(1, 2));
  CHECK(durations(p1) == std::vector<Millis>{0, 4, 2, 4, 7, 3, 3, 2, 1, 0});
  std::vector<std::string> lab;
  for (const auto& e : p1.entries) lab.push_back(log.artifacts[1].state_name(e.state[0]));
  CHECK(lab == std::vector<std::string>{"⊥", "A", "B", "C", "D", "E", "B", "C", "D", "⊤"});
  CHECK(project_sequence(seq, ProjectionIndexSet::all(2)).entries == seq.entries);
}

TEST_CASE("header forms, quoting and line endings") {
  const auto events = parse(
      "\xEF\xBB\xBF" "Timestamp,Case_ID,extra,Artifact,State\r\n"
      "2017-01-02,\"c,1\",x,lab,\"B \"\"two\"\"\"\r\n"
      "2017-01-01,\"c,1\",,lab,A\r\n"
      "\r\n");
  REQUIRE(events.size() == 2);
  CHECK(events[0].case_id == "c,1");
  CHECK(events[0].state == "A");
  CHECK(events[0].line == 3);
  CHECK(events[1].state == "B \"two\"");
}

TEST_CASE("malformed rows report their line") {
  auto line_of = [](const std::string& csv) {
    try {
      parse(csv);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("case_id,artifact,state,timestamp\nc,a,s,2017-01-01\nc,a,s\n") == 3);
  CHECK(line_of("case_id,artifact,state,timestamp\nc,a,s,yesterday\n") == 2);
  CHECK(line_of("case_id,artifact,state,timestamp\nc,a,\"s,2017-01-01\n") == 2);
  CHECK(line_of("case_id,artifact,state,timestamp\nc,a,⊥,2017-01-01\n") == 2);
  CHECK(line_of("case_id,artifact,state,timestamp\n,a,s,2017-01-01\n") == 2);
  CHECK(line_of("case_id,who,timestamp\nc,a,2017-01-01\n") == 1);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse_events(std::filesystem::path("/nonexistent/log.csv")), IoError);
}

TEST_CASE("activity form goes through the mapping") {
  const std::string csv =
      "case_id,activity,timestamp\n"
      "1,A_SUBMITTED,2012-01-01T10:00:00\n"
      "1,W_Call+START,2012-01-01T11:00:00\n"
      "1,noise,2012-01-01T11:30:00\n"
      "1,A_ACCEPTED,2012-01-02T10:00:00\n";
  CHECK_THROWS_AS(parse(csv), MappingError);

  const auto strict = mapping_from(R"j({"rules":[{"pattern":"A_(.*)","artifact":"a","state":"$1"},
                                                {"pattern":"W_(.*)\\+START","artifact":"w","state":"$1.start"}]})j");
  CHECK_THROWS_AS(parse(csv, &strict), MappingError);

  const auto skip = mapping_from(R"j({"rules":[{"pattern":"W_(.*)\\+START","artifact":"w","state":"$1.start"},
                                              {"pattern":"A_(.*)","artifact":"a","state":"$1"}],
                                     "unmatched_policy":"skip"})j");
  const auto events = parse(csv, &skip);
  REQUIRE(events.size() == 3);
  CHECK(events[1].artifact == "w");
  CHECK(events[1].state == "Call.start");
  const auto decls = declare_artifacts(events, &skip);
  REQUIRE(decls.size() == 2);
  CHECK(decls[0].name == "w");  // rule order, not first appearance
  CHECK(decls[1].states == std::vector<std::string>{"ACCEPTED", "SUBMITTED"});

  const auto whole = mapping_from(R"j({"rules":[{"pattern":".*","artifact":"x","state":"$0"}]})j");
  CHECK(whole.map("anything")->second == "anything");
}

TEST_CASE("mapping config validation") {
  CHECK_THROWS_AS(mapping_from(R"j({"rules":[]})j"), MappingError);
  CHECK_THROWS_AS(mapping_from(R"j({"rules":[{"pattern":"(","artifact":"a","state":"s"}]})j"), MappingError);
  CHECK_THROWS_AS(mapping_from(R"j({"rules":[{"pattern":"x","artifact":"","state":"s"}]})j"), MappingError);
  CHECK_THROWS_AS(mapping_from(R"j({"rules":[{"pattern":"x","artifact":"a","state":"s"}],"unmatched_policy":"drop"})j"),
                  MappingError);
  CHECK_THROWS_AS(mapping_from(R"j([1,2])j"), MappingError);
  CHECK_THROWS_AS(MappingConfig::load("/nonexistent/mapping.json"), IoError);
}

TEST_CASE("simultaneous events form one composite transition") {
  const auto log = load_csv(
      "case_id,artifact,state,timestamp\n"
      "c,p,Y,2017-01-01\nc,l,C,2017-01-01\nc,p,Z,2017-01-03\nc,l,D,2017-01-03\n");
  const auto& e = log.sequences.at(0).entries;
  REQUIRE(e.size() == 4);
  CHECK(describe(e[1].state, log.artifacts) == "(Y,C)");
  CHECK(describe(e[2].state, log.artifacts) == "(Z,D)");
  // Without a closing row the case ends at its last event.
  CHECK(e[3].time == e[2].time);
  CHECK(entry_duration(log.sequences[0], 2) == 0);
}

TEST_CASE("conflicting simultaneous events") {
  try {
    load_csv("case_id,artifact,state,timestamp\nc7,p,Y,2017-01-01\nc7,p,Z,2017-01-01\n");
    FAIL("expected a conflict");
  } catch (const ConflictError& e) {
    CHECK(std::string(e.what()).find("c7") != std::string::npos);
    CHECK(std::string(e.what()).find("2017-01-01T00:00:00.000Z") != std::string::npos);
  }
  // The same state twice is not a conflict.
  CHECK_NOTHROW(load_csv("case_id,artifact,state,timestamp\nc,p,Y,2017-01-01\nc,p,Y,2017-01-01\n"));
}

TEST_CASE("repeated states collapse and partial coverage keeps the initial marker") {
  const auto log = load_csv(
      "case_id,artifact,state,timestamp\n"
      "a,p,W,2017-01-01\na,p,W,2017-01-02\na,p,X,2017-01-04\n"
      "b,p,W,2017-01-01\nb,l,A,2017-01-02\n");
  REQUIRE(log.artifacts.size() == 2);
  const auto& a = log.sequences.at(0).entries;
  REQUIRE(a.size() == 4);
  CHECK(describe(a[1].state, log.artifacts) == "(W,⊥)");
  CHECK(a[1].state.is_regular());
  CHECK(a[2].time - a[1].time == 3 * kDay);
  CHECK(artifact_coverage(log) == std::vector<std::uint64_t>{2, 1});
}

TEST_CASE("identical traces merge on states and delays") {
  const auto log = load_csv(
      "case_id,artifact,state,timestamp\n"
      "a,p,W,2017-01-01\na,p,X,2017-01-03\n"
      "b,p,W,2017-02-01\nb,p,X,2017-02-03\n"
      "c,p,W,2017-01-01\nc,p,X,2017-01-04\n"
      "d,*,,2017-01-01\n");
  REQUIRE(log.sequences.size() == 2);
  CHECK(log.sequences[0].multiplicity == 2);
  CHECK(log.sequences[1].multiplicity == 1);
  CHECK(log.trace_count() == 3);
}

TEST_CASE("empty logs") {
  const auto log = load_csv("case_id,artifact,state,timestamp\n");
  CHECK(log.empty());
  CHECK_THROWS_AS(discover_model(log), EmptyLogError);
}

TEST_CASE("sequence properties on random logs") {
  const auto corpus = testing::random_corpus(60, 11);
  for (const auto& events : corpus) {
    // Through the CSV text once, to cover the parser as well.
    std::istringstream csv(testing::to_csv(events));
    const auto parsed = parse_events(csv);
    REQUIRE(parsed.size() == events.size());
    const auto log = testing::log_from_events(parsed);
    const std::size_t n = log.artifacts.size();
    const auto model = discover_model(log);
    CHECK_NOTHROW(annotate(model, log));

    for (const auto& seq : log.sequences) {
      CHECK_NOTHROW(validate_sequence(seq, n));
      CHECK(entry_duration(seq, 0) == 0);
      CHECK(entry_duration(seq, seq.size() - 1) == 0);
      CHECK(seq.entries[0].time == seq.entries[1].time);

      Millis sum = 0;
      for (std::size_t k = 0; k < seq.size(); ++k) sum += entry_duration(seq, k);
      CHECK(sum == seq.span());

      CHECK(project_sequence(seq, ProjectionIndexSet::all(n)).entries == seq.entries);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          const ProjectionIndexSet outer({a, b}, n);
          const auto pair = project_sequence(seq, outer);
          CHECK(pair.first_time() == seq.first_time());
          CHECK(pair.last_time() == seq.last_time());
          Millis psum = 0;
          for (std::size_t k = 0; k < pair.size(); ++k) psum += entry_duration(pair, k);
          CHECK(psum == seq.span());
          for (std::size_t c : {a, b}) {
            const ProjectionIndexSet inner({c}, n);
            CHECK(project_sequence(pair, inner.relative_to(outer)).entries == project_sequence(seq, inner).entries);
          }
        }
      }
    }
  }
}
