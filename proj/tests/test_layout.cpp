#include <doctest.h>

#include "support/helpers.hpp"

#include "flow2bpmn/corpus.hpp"

using namespace flow2bpmn;
using testsupport::run_pipeline;

namespace {

double center_y(const DiPlane& plane, const std::string& id) {
  const DiShape* s = plane.find_shape(id);
  REQUIRE(s != nullptr);
  return s->cy();
}

}  // namespace

TEST_CASE("default parameters") {
  LayoutParams p = default_params();
  CHECK(p.cell_width == 180);
  CHECK(p.task_width == 100);
  CHECK(p.task_height == 80);
  CHECK(p.event_size == 36);
  CHECK(p.gateway_size == 50);
  CHECK(p.lane_padding == 20);
  CHECK(p.margin == 40);
  LayoutParams q = default_params();
  CHECK(p.cell_width == q.cell_width);
  CHECK(p.margin == q.margin);
}

TEST_CASE("linear chain: ranked columns, aligned centers, straight edges") {
  auto art = run_pipeline(testsupport::minimal_flow_json());
  const DiPlane& plane = art.plane;
  LayoutParams p = default_params();

  const DiShape* s = plane.find_shape("n_s");
  const DiShape* a = plane.find_shape("n_a");
  const DiShape* e = plane.find_shape("n_e");
  REQUIRE(s);
  REQUIRE(a);
  REQUIRE(e);
  CHECK(s->x == p.margin + 0 * p.cell_width);
  CHECK(a->x == p.margin + 1 * p.cell_width);
  CHECK(e->x == p.margin + 2 * p.cell_width);
  CHECK(center_y(plane, "n_s") == center_y(plane, "n_a"));
  CHECK(center_y(plane, "n_a") == center_y(plane, "n_e"));

  for (const auto& edge : plane.edges) {
    CHECK(edge.waypoints.size() == 2);
    CHECK(edge.waypoints[0].second == edge.waypoints[1].second);  // horizontal
  }

  // First/last waypoints sit on the shape boundaries.
  const DiEdge* t1 = plane.find_edge("f_t1");
  REQUIRE(t1);
  CHECK(t1->waypoints.front().first == s->x + s->w);
  CHECK(t1->waypoints.back().first == a->x);
}

TEST_CASE("widening the cell widens every rank delta") {
  auto art = run_pipeline(testsupport::minimal_flow_json());
  LayoutParams wide = default_params();
  wide.cell_width = 240;
  DiPlane plane = layout(art.model, wide);
  const DiShape* s = plane.find_shape("n_s");
  const DiShape* a = plane.find_shape("n_a");
  const DiShape* e = plane.find_shape("n_e");
  CHECK(a->x - s->x == 240);
  CHECK(e->x - a->x == 240);
}

TEST_CASE("diamond branches sit symmetrically about the split gateway") {
  auto art = run_pipeline(testsupport::diamond_json());
  const DiPlane& plane = art.plane;

  double gw = center_y(plane, "gw_a_split");
  double up = center_y(plane, "n_b") - gw;
  double down = center_y(plane, "n_c") - gw;
  CHECK(up == -down);
  CHECK(up != 0);

  double join = center_y(plane, "gw_d_join");
  CHECK(std::abs((center_y(plane, "n_b") - join) + (center_y(plane, "n_c") - join)) < 1e-9);
}

TEST_CASE("lane bands tile the pool and contain their member shapes") {
  auto art = run_pipeline(testsupport::diamond_json());
  const DiPlane& plane = art.plane;
  CHECK(testsupport::lanes_contain_shapes(art.model, plane));
  double covered = 0;
  for (const auto& band : plane.bands) covered += band.height;
  CHECK(covered == plane.pool_h);
}

TEST_CASE("corpus layouts satisfy the geometric invariants") {
  auto dir = testsupport::fresh_temp_dir("layout_corpus");
  CorpusOptions options;
  options.seed = 13;
  options.count = 10;
  options.min_size = 20;
  options.max_size = 80;
  CorpusManifest manifest = corpus_generate(options, dir);

  for (const auto& info : manifest.files) {
    auto art = run_pipeline(testsupport::slurp(dir / info.file), info.file);
    const DiPlane& plane = art.plane;
    const BpmnProcess& proc = art.model.processes.front();

    // Independent geometry checker: overlaps and lane containment.
    CHECK(testsupport::no_shape_overlaps(plane));
    CHECK(testsupport::lanes_contain_shapes(art.model, plane));

    // Forward direction (generated corpora are acyclic) and waypoint budget.
    for (const auto& f : proc.flows) {
      const DiShape* src = plane.find_shape(f.source_id);
      const DiShape* dst = plane.find_shape(f.target_id);
      REQUIRE(src);
      REQUIRE(dst);
      CHECK(dst->x >= src->x);
      const DiEdge* edge = plane.find_edge(f.id);
      REQUIRE(edge);
      CHECK(edge->waypoints.size() >= 2);
      CHECK(edge->waypoints.size() <= 6);
    }

    // Every flow node has exactly one shape.
    CHECK(plane.shapes.size() == proc.nodes.size());
    CHECK(plane.edges.size() == proc.flows.size());
  }
}

TEST_CASE("barycenter sweeps never leave more crossings than the initial order") {
  auto dir = testsupport::fresh_temp_dir("layout_crossings");
  CorpusOptions options;
  options.seed = 17;
  options.count = 12;
  options.min_size = 8;
  options.max_size = 15;
  CorpusManifest manifest = corpus_generate(options, dir);

  for (const auto& info : manifest.files) {
    auto art = run_pipeline(testsupport::slurp(dir / info.file), info.file);
    LayoutParams lex = default_params();
    lex.barycenter_sweeps = 0;
    DiPlane initial = layout(art.model, lex);
    DiPlane final_plane = layout(art.model, default_params());
    long before = testsupport::count_crossings_oracle(art.model, initial);
    long after = testsupport::count_crossings_oracle(art.model, final_plane);
    CHECK(after <= before);
  }
}

TEST_CASE("cycles are broken by reversing a back edge and routed below") {
  std::string loop = R"({
    "specVersion": 1, "kind": "flow", "name": "loop",
    "nodes": [
      {"id": "s", "role": "start"},
      {"id": "a", "role": "action", "queue": "q1"},
      {"id": "b", "role": "action", "queue": "q1"},
      {"id": "e", "role": "end"}
    ],
    "transitions": [
      {"id": "t1", "from": "s", "to": "a"},
      {"id": "t2", "from": "a", "to": "b"},
      {"id": "t3", "from": "b", "to": "a", "guard": "rework"},
      {"id": "t4", "from": "b", "to": "e"}
    ],
    "queues": [{"id": "q1", "label": "Q", "kind": "human"}]
  })";
  auto art = run_pipeline(loop);
  std::vector<std::string> warnings;
  DiPlane plane = layout(art.model, default_params(), &warnings);
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("back edge") != std::string::npos);

  // The loop edge f_t3 runs right-to-left; everything else points forward.
  const BpmnProcess& proc = art.model.processes.front();
  for (const auto& f : proc.flows) {
    const DiShape* src = plane.find_shape(f.source_id);
    const DiShape* dst = plane.find_shape(f.target_id);
    if (f.id == "f_t3")
      CHECK(dst->x < src->x);
    else
      CHECK(dst->x >= src->x);
  }
  const DiEdge* back = plane.find_edge("f_t3");
  REQUIRE(back);
  CHECK(back->waypoints.size() <= 6);
  CHECK(testsupport::no_shape_overlaps(plane));
}

TEST_CASE("layout is deterministic") {
  auto art = run_pipeline(testsupport::diamond_json());
  DiPlane p1 = layout(art.model);
  DiPlane p2 = layout(art.model);
  CHECK(to_bpmn_xml(art.model, p1) == to_bpmn_xml(art.model, p2));
}
