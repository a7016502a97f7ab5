#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/helpers.hpp"

#include "flow2bpmn/corpus.hpp"

using namespace flow2bpmn;
using testsupport::bundled_config;

namespace {

const std::string ex = "http://x.org/";

Triple type_of(const std::string& s, const std::string& cls) {
  return Triple{s, vocab::rdf_type, Term::iri(cls)};
}

}  // namespace

TEST_CASE("subclass closure and type inheritance") {
  TripleGraph g;
  g.insert(Triple{ex + "A", vocab::rdfs_subClassOf, Term::iri(ex + "B")});
  g.insert(Triple{ex + "B", vocab::rdfs_subClassOf, Term::iri(ex + "C")});
  g.insert(type_of(ex + "x", ex + "A"));

  SaturationResult result = saturate(g, {});
  CHECK(result.graph.has(ex + "A", vocab::rdfs_subClassOf, Term::iri(ex + "C")));
  CHECK(result.graph.contains(type_of(ex + "x", ex + "B")));
  CHECK(result.graph.contains(type_of(ex + "x", ex + "C")));
  CHECK(result.graph.size() == g.size() + 3);
  CHECK(result.report.total_added() == 3);
  // Per-source counts account for every added triple.
  CHECK(result.graph.size() == g.size() + result.report.total_added());
  CHECK(result.report.iterations >= 2);
}

TEST_CASE("equivalence copies types in both directions") {
  TripleGraph g;
  g.insert(Triple{vocab::sf_ActionNode, vocab::owl_equivalentClass,
                  Term::iri(vocab::bpmn_UserTask)});
  g.insert(type_of(ex + "n", vocab::sf_ActionNode));
  g.insert(type_of(ex + "m", vocab::bpmn_UserTask));

  SaturationResult result = saturate(g, {});
  CHECK(result.graph.contains(type_of(ex + "n", vocab::bpmn_UserTask)));
  CHECK(result.graph.contains(type_of(ex + "m", vocab::sf_ActionNode)));
  CHECK(result.graph.has(vocab::bpmn_UserTask, vocab::owl_equivalentClass,
                         Term::iri(vocab::sf_ActionNode)));
}

TEST_CASE("property correspondences propagate assertions") {
  TripleGraph g;
  g.insert(Triple{ex + "p", vocab::rdfs_subPropertyOf, Term::iri(ex + "q")});
  g.insert(Triple{ex + "r", vocab::owl_equivalentProperty, Term::iri(ex + "t")});
  g.insert(Triple{ex + "x", ex + "p", Term::iri(ex + "y")});
  g.insert(Triple{ex + "u", ex + "t", Term::str("v")});

  SaturationResult result = saturate(g, {});
  CHECK(result.graph.has(ex + "x", ex + "q", Term::iri(ex + "y")));
  CHECK(result.graph.has(ex + "u", ex + "r", Term::str("v")));
}

TEST_CASE("rules join over shared variables") {
  TripleGraph g;
  g.insert(Triple{ex + "n", ex + "has_queue", Term::iri(ex + "q")});
  g.insert(Triple{ex + "q", ex + "kind", Term::str("human")});
  g.insert(Triple{ex + "n2", ex + "has_queue", Term::iri(ex + "q2")});
  g.insert(Triple{ex + "q2", ex + "kind", Term::str("system")});

  RuleLite rule;
  rule.name = "human-task";
  rule.body = {
      TriplePattern{PatternTerm::variable("n"), PatternTerm::constant(Term::iri(ex + "has_queue")),
                    PatternTerm::variable("q")},
      TriplePattern{PatternTerm::variable("q"), PatternTerm::constant(Term::iri(ex + "kind")),
                    PatternTerm::constant(Term::str("human"))},
  };
  rule.head = {TriplePattern{PatternTerm::variable("n"),
                             PatternTerm::constant(Term::iri(vocab::rdf_type)),
                             PatternTerm::constant(Term::iri(ex + "HumanTask"))}};

  SaturationResult result = saturate(g, {rule});
  CHECK(result.graph.contains(type_of(ex + "n", ex + "HumanTask")));
  CHECK_FALSE(result.graph.contains(type_of(ex + "n2", ex + "HumanTask")));
  CHECK(result.report.added_by_source.at("rule:human-task") == 1);
}

TEST_CASE("head variables must occur in the body") {
  RuleLite rule;
  rule.name = "unsafe";
  rule.body = {TriplePattern{PatternTerm::variable("n"),
                             PatternTerm::constant(Term::iri(vocab::rdf_type)),
                             PatternTerm::constant(Term::iri(ex + "A"))}};
  rule.head = {TriplePattern{PatternTerm::variable("other"),
                             PatternTerm::constant(Term::iri(vocab::rdf_type)),
                             PatternTerm::constant(Term::iri(ex + "B"))}};
  TripleGraph g;
  try {
    saturate(g, {rule});
    FAIL("expected failure");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::RuleUnsafe);
  }
}

TEST_CASE("fixpoint budget caps runaway ontologies") {
  TripleGraph g;
  for (int i = 0; i < 8; ++i)
    g.insert(Triple{ex + "C" + std::to_string(i), vocab::rdfs_subClassOf,
                    Term::iri(ex + "C" + std::to_string(i + 1))});
  SaturateOptions tight;
  tight.max_iterations = 1;
  try {
    saturate(g, {}, tight);
    FAIL("expected failure");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::FixpointBudget);
  }
  CHECK_NOTHROW(saturate(g, {}));
}

TEST_CASE("saturation equals the matrix closure oracle on random ontologies") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 50; ++round) {
    int num_classes = 2 + static_cast<int>(rng() % 19);
    int num_axioms = static_cast<int>(rng() % 31);
    int num_individuals = 1 + static_cast<int>(rng() % 15);

    std::vector<std::string> classes;
    for (int i = 0; i < num_classes; ++i) classes.push_back(ex + "C" + std::to_string(i));
    testsupport::ClosureOracle oracle(classes);

    TripleGraph g;
    for (int i = 0; i < num_axioms; ++i) {
      const std::string& a = classes[rng() % classes.size()];
      const std::string& b = classes[rng() % classes.size()];
      if (rng() % 3 == 0) {
        g.insert(Triple{a, vocab::owl_equivalentClass, Term::iri(b)});
        oracle.add_equivalent(a, b);
      } else {
        g.insert(Triple{a, vocab::rdfs_subClassOf, Term::iri(b)});
        oracle.add_subclass(a, b);
      }
    }
    std::map<std::string, std::set<std::string>> asserted;
    for (int i = 0; i < num_individuals; ++i) {
      std::string ind = ex + "x" + std::to_string(i);
      int types = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < types; ++k) {
        const std::string& cls = classes[rng() % classes.size()];
        asserted[ind].insert(cls);
        g.insert(type_of(ind, cls));
      }
    }
    oracle.close();

    SaturationResult result = saturate(g, {});
    for (const auto& [ind, types] : asserted) {
      std::set<std::string> expected = oracle.types_of(types);
      std::set<std::string> actual;
      for (const auto& t : result.graph.objects(ind, vocab::rdf_type)) actual.insert(t.value);
      CHECK(actual == expected);
    }
  }
}

TEST_CASE("saturation is monotone, idempotent and rule-order independent") {
  const LoadedConfig& loaded = bundled_config();
  WorkflowSpec spec = parse_spec(testsupport::diamond_json(), "d.json");
  TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);

  SaturationResult once = saturate(merged, loaded.rules);
  for (const auto& [t, l] : merged.all()) CHECK(once.graph.contains(t));

  SaturationResult twice = saturate(once.graph, loaded.rules);
  CHECK(twice.graph == once.graph);
  CHECK(twice.report.total_added() == 0);

  std::vector<RuleLite> shuffled = loaded.rules;
  std::reverse(shuffled.begin(), shuffled.end());
  SaturationResult reordered = saturate(merged, shuffled);
  CHECK(reordered.graph == once.graph);
}

TEST_CASE("guarded fan-out becomes an exclusive gateway carrying the guards") {
  const LoadedConfig& loaded = bundled_config();
  std::string text = R"({
    "specVersion": 1, "kind": "flow", "name": "split",
    "nodes": [
      {"id": "s", "role": "start"},
      {"id": "a", "role": "action", "queue": "q1"},
      {"id": "b", "role": "action", "queue": "q1"},
      {"id": "c", "role": "action", "queue": "q1"},
      {"id": "e", "role": "end"}
    ],
    "transitions": [
      {"id": "t0", "from": "s", "to": "a"},
      {"id": "t1", "from": "a", "to": "b", "guard": "x > 1"},
      {"id": "t2", "from": "a", "to": "c", "guard": "x <= 1"},
      {"id": "t3", "from": "b", "to": "e"},
      {"id": "t4", "from": "c", "to": "e"}
    ],
    "queues": [{"id": "q1", "label": "Q", "kind": "human"}]
  })";
  WorkflowSpec spec = parse_spec(text, "split.json");
  TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);
  TripleGraph g = synthesize_gateways(saturate(merged, loaded.rules).graph);

  std::string a = loaded.instance_base + "split/nodes/a";
  std::string gw = a + "/split";
  CHECK(g.has(gw, vocab::rdf_type, Term::iri(vocab::bpmn_ExclusiveGateway)));
  CHECK(g.has(a, vocab::sf_transitionsTo, Term::iri(gw)));
  // Outgoing transitions now leave the gateway and keep their guards.
  std::string t1 = loaded.instance_base + "split/transitions/t1";
  CHECK(g.has(t1, vocab::sf_has_source, Term::iri(gw)));
  CHECK(g.has(t1, vocab::sf_guard, Term::str("x > 1")));
  // Gateway traces to the owning node's source element.
  CHECK(g.has(gw, vocab::trace_sourcePath, Term::str("/nodes/1")));
  // No default flow: both branches guarded.
  CHECK(g.with_predicate(vocab::sf_isDefault).empty());
}

TEST_CASE("single outgoing transition leaves the graph unchanged") {
  const LoadedConfig& loaded = bundled_config();
  WorkflowSpec spec = parse_spec(testsupport::minimal_flow_json(), "m.json");
  TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);
  TripleGraph saturated = saturate(merged, loaded.rules).graph;
  TripleGraph after = synthesize_gateways(saturated);
  CHECK(after == saturated);
}

TEST_CASE("diamond synthesizes one parallel split and one parallel join") {
  const LoadedConfig& loaded = bundled_config();
  WorkflowSpec spec = parse_spec(testsupport::diamond_json(), "d.json");

  // Brute-force oracle over the spec: fan-out>=2 and fan-in>=2 node counts.
  CHECK(testsupport::spec_gateway_demand(spec) == 2);

  TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);
  TripleGraph g = synthesize_gateways(saturate(merged, loaded.rules).graph);

  std::string split = loaded.instance_base + "diamond/nodes/a/split";
  std::string join = loaded.instance_base + "diamond/nodes/d/join";
  CHECK(g.has(split, vocab::rdf_type, Term::iri(vocab::bpmn_ParallelGateway)));
  CHECK(g.has(join, vocab::rdf_type, Term::iri(vocab::bpmn_ParallelGateway)));
  std::size_t gateways =
      g.subjects_with(vocab::rdf_type, Term::iri(vocab::bpmn_ParallelGateway)).size() +
      g.subjects_with(vocab::rdf_type, Term::iri(vocab::bpmn_ExclusiveGateway)).size();
  CHECK(gateways == 2);

  // Idempotence: a second pass finds nothing left to rewire.
  TripleGraph again = synthesize_gateways(g);
  CHECK(again == g);
}

TEST_CASE("mixed guarded fan-out marks the unguarded flow as default") {
  const LoadedConfig& loaded = bundled_config();
  std::string text = R"({
    "specVersion": 1, "kind": "flow", "name": "mixed",
    "nodes": [
      {"id": "s", "role": "start"},
      {"id": "a", "role": "action", "queue": "q1"},
      {"id": "b", "role": "action", "queue": "q1"},
      {"id": "c", "role": "action", "queue": "q1"},
      {"id": "e", "role": "end"}
    ],
    "transitions": [
      {"id": "t0", "from": "s", "to": "a"},
      {"id": "t1", "from": "a", "to": "b", "guard": "approved"},
      {"id": "t2", "from": "a", "to": "c"},
      {"id": "t3", "from": "b", "to": "e"},
      {"id": "t4", "from": "c", "to": "e"}
    ],
    "queues": [{"id": "q1", "label": "Q", "kind": "human"}]
  })";
  WorkflowSpec spec = parse_spec(text, "mixed.json");
  TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);
  TripleGraph g = synthesize_gateways(saturate(merged, loaded.rules).graph);

  std::string gw = loaded.instance_base + "mixed/nodes/a/split";
  CHECK(g.has(gw, vocab::rdf_type, Term::iri(vocab::bpmn_ExclusiveGateway)));
  std::string t2 = loaded.instance_base + "mixed/transitions/t2";
  CHECK(g.has(t2, vocab::sf_isDefault, Term::str("true")));
}

TEST_CASE("classification soundness on generated specs") {
  const LoadedConfig& loaded = bundled_config();
  auto dir = testsupport::fresh_temp_dir("reasoner_soundness");
  CorpusOptions options;
  options.seed = 5;
  options.count = 8;
  options.min_size = 20;
  options.max_size = 60;
  corpus_generate(options, dir);

  for (int i = 0; i < options.count; ++i) {
    std::string file = "spec_00" + std::to_string(i) + ".json";
    WorkflowSpec spec = parse_spec(testsupport::slurp(dir / file), file);
    TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
    TripleGraph merged = loaded.tbox;
    for (const auto& [t, l] : abox.all()) merged.insert(t, Layer::abox);
    TripleGraph g = saturate(merged, loaded.rules).graph;

    // Expected sets straight from the WorkflowSpec.
    std::set<std::string> expect_user, expect_service;
    for (const auto& n : spec.nodes) {
      if (n.role != NodeRole::action) continue;
      std::string iri = loaded.instance_base + percent_encode(spec.name) + "/nodes/" +
                        percent_encode(n.id);
      if (spec.has_human_queue(n))
        expect_user.insert(iri);
      else if (n.processor)
        expect_service.insert(iri);
    }
    std::set<std::string> user, service;
    for (const auto& s : g.subjects_with(vocab::rdf_type, Term::iri(vocab::bpmn_UserTask)))
      user.insert(s);
    for (const auto& s : g.subjects_with(vocab::rdf_type, Term::iri(vocab::bpmn_ServiceTask)))
      service.insert(s);
    CHECK(user == expect_user);
    CHECK(service == expect_service);
  }
}
