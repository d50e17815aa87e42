#include "doctest.h"

#include "csm/errors.hpp"
#include "csm/model.hpp"
#include "fixtures.hpp"

using namespace csm;

namespace {

CompositeState cs(std::initializer_list<StateIndex> slots) { return CompositeState(std::vector<StateIndex>(slots)); }

std::vector<ArtifactDecl> patient_lab() {
  return {{0, "patient", {"W", "X", "Y", "Z"}}, {1, "lab", {"A", "B", "C", "D", "E"}}};
}

// The invariants every model instance has to satisfy.
void check_model(const CsmModel& m) {
  for (const auto& t : m.transitions()) {
    CHECK(t.from != t.to);
    CHECK(t.to != m.initial());
    CHECK(t.from != m.final_state());
    CHECK((t.from == m.initial() || m.contains_state(t.from)));
    CHECK((t.to == m.final_state() || m.contains_state(t.to)));
  }
}

}  // namespace

TEST_CASE("composite state kind is derived from the slots") {
  CHECK(CompositeState::initial(2).kind() == StateKind::initial);
  CHECK(CompositeState::final_state(3).kind() == StateKind::final_);
  CHECK(cs({0, 1}).kind() == StateKind::regular);
  CHECK(cs({kInitialMarker, 1}).kind() == StateKind::regular);
  CHECK(cs({kFinalMarker, kInitialMarker}).kind() == StateKind::regular);
  CHECK(describe(cs({0, 2}), patient_lab()) == "(W,C)");
  CHECK(describe(CompositeState::initial(2), patient_lab()) == "(⊥,⊥)");
}

TEST_CASE("artifact declarations") {
  auto a = patient_lab();
  CHECK(a[1].find_state("C") == 2);
  CHECK_FALSE(a[1].find_state("Q").has_value());
  CHECK(a[0].state_name(kFinalMarker) == "⊤");
  CHECK_NOTHROW(validate_artifacts(a));
  a[1].index = 5;
  CHECK_THROWS_AS(validate_artifacts(a), ModelError);
  a = patient_lab();
  a[0].states = {"W", "W"};
  CHECK_THROWS_AS(validate_artifacts(a), ModelError);
  a[0].states = {"", "W"};
  CHECK_THROWS_AS(validate_artifacts(a), ModelError);
}

TEST_CASE("projection index sets") {
  CHECK_THROWS_AS(ProjectionIndexSet({}, 2), ProjectionError);
  CHECK_THROWS_AS(ProjectionIndexSet({0, 0}, 2), ProjectionError);
  CHECK_THROWS_AS(ProjectionIndexSet({2}, 2), ProjectionError);
  const ProjectionIndexSet unsorted({2, 0}, 3);
  CHECK(unsorted[0] == 0);
  CHECK(unsorted[1] == 2);
  const ProjectionIndexSet inner({2}, 3);
  CHECK(inner.relative_to(unsorted) == ProjectionIndexSet({1}, 2));
  CHECK_THROWS_AS(ProjectionIndexSet({1}, 3).relative_to(unsorted), ProjectionError);
}

TEST_CASE("project_state") {
  CHECK(project_state(cs({1, 3}), ProjectionIndexSet::single(0, 2)) == cs({1}));
  CHECK(project_state(cs({0, 3}), ProjectionIndexSet::all(2)) == cs({0, 3}));
  auto init = project_state(CompositeState::initial(2), ProjectionIndexSet::single(1, 2));
  CHECK(init.kind() == StateKind::initial);
  CHECK(project_state(cs({kInitialMarker, 3}), ProjectionIndexSet::single(0, 2)).kind() == StateKind::initial);
  CHECK_THROWS_AS(project_state(cs({0}), ProjectionIndexSet::single(1, 2)), ProjectionError);
}

TEST_CASE("model construction rejects broken invariants") {
  const auto a = patient_lab();
  const auto i = CompositeState::initial(2), f = CompositeState::final_state(2);
  CHECK_THROWS_AS(CsmModel(a, {cs({0, 0})}, {{cs({0, 0}), cs({0, 0})}}), ModelError);
  CHECK_THROWS_AS(CsmModel(a, {cs({0, 0})}, {{cs({0, 0}), i}}), ModelError);
  CHECK_THROWS_AS(CsmModel(a, {cs({0, 0})}, {{f, cs({0, 0})}}), ModelError);
  CHECK_THROWS_AS(CsmModel(a, {cs({0, 0})}, {{cs({0, 0}), cs({1, 1})}}), ModelError);
  CHECK_THROWS_AS(CsmModel(a, {cs({0})}, {}), ModelError);
  CHECK_THROWS_AS(CsmModel(a, {cs({0, 9})}, {}), ModelError);
  const CsmModel ok(a, {cs({0, 0}), cs({0, 0})}, {{i, cs({0, 0})}, {cs({0, 0}), f}});
  CHECK(ok.states().size() == 1);
  check_model(ok);
}

TEST_CASE("running example artifact models") {
  const auto log = testing::running_example_log();
  const auto m = discover_model(log);
  check_model(m);
  CHECK(m.states().size() == 13);

  const auto patient = artifact_model(m, 0);
  check_model(patient);
  CHECK(patient.states().size() == 4);
  auto st = [](StateIndex s) { return cs({s}); };
  // W X Y Z = 0 1 2 3; the direct W -> Y edge comes from the short variant.
  CHECK(patient.contains_transition(st(0), st(1)));
  CHECK(patient.contains_transition(st(1), st(2)));
  CHECK(patient.contains_transition(st(2), st(3)));
  CHECK(patient.contains_transition(st(0), st(2)));
  CHECK_FALSE(patient.contains_transition(st(1), st(0)));

  const auto lab = artifact_model(m, 1);
  check_model(lab);
  CHECK(lab.states().size() == 5);
  // A B C D E = 0 1 2 3 4: the C -> E -> B -> C cycle.
  CHECK(lab.contains_transition(st(2), st(4)));
  CHECK(lab.contains_transition(st(4), st(1)));
  CHECK(lab.contains_transition(st(1), st(2)));
  CHECK(lab.contains_transition(CompositeState::initial(1), st(0)));
  CHECK(lab.contains_transition(st(3), CompositeState::final_state(1)));
}

TEST_CASE("projection identity and composition on random logs") {
  const auto corpus = testing::random_corpus(40, 7);
  for (const auto& events : corpus) {
    const auto log = testing::log_from_events(events);
    const auto m = discover_model(log);
    const std::size_t n = m.artifact_count();
    check_model(m);

    CHECK(project_model(m, ProjectionIndexSet::all(n)) == m);

    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const ProjectionIndexSet outer({a, b}, n);
        const auto pm = project_model(m, outer);
        check_model(pm);
        for (std::size_t c : {a, b}) {
          const ProjectionIndexSet inner({c}, n);
          CHECK(project_model(pm, inner.relative_to(outer)) == project_model(m, inner));
        }
        // Every projected state has a preimage.
        for (const auto& s : pm.states()) {
          bool found = false;
          for (const auto& full : m.states()) found = found || project_state(full, outer) == s;
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("projected artifact declarations are re-indexed") {
  const auto p = project_artifacts(patient_lab(), ProjectionIndexSet::single(1, 2));
  REQUIRE(p.size() == 1);
  CHECK(p[0].index == 0);
  CHECK(p[0].name == "lab");
}
