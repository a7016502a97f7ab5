#pragma once

// Shared test scaffolding: bundled-file access, a pipeline driver that
// exposes every intermediate artifact, and independent oracles kept apart
// from the library implementations they check.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flow2bpmn/batch.hpp"
#include "flow2bpmn/builder.hpp"
#include "flow2bpmn/ingest.hpp"
#include "flow2bpmn/kb.hpp"
#include "flow2bpmn/layout.hpp"
#include "flow2bpmn/lifting.hpp"
#include "flow2bpmn/mapping.hpp"
#include "flow2bpmn/reasoner.hpp"
#include "flow2bpmn/rules.hpp"
#include "flow2bpmn/serializer.hpp"
#include "flow2bpmn/validator.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using namespace flow2bpmn;

inline fs::path data_dir() { return fs::path(FLOW2BPMN_DATA_DIR); }

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline fs::path fresh_temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("flow2bpmn_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Bundled knowledge base + mappings, loaded once per process.
inline const LoadedConfig& bundled_config() {
  static LoadedConfig loaded = [] {
    PipelineConfig config;
    config.mappings_path = data_dir() / "mappings" / "smartflow.ttl";
    config.ontology_paths = {data_dir() / "ontologies" / "smartflow.ttl",
                             data_dir() / "ontologies" / "bpmn_bbo.ttl",
                             data_dir() / "ontologies" / "bridge.ttl"};
    config.rules_path = data_dir() / "ontologies" / "rules.ttl";
    return load_config(config);
  }();
  return loaded;
}

struct PipelineArtifacts {
  WorkflowSpec spec;
  TripleGraph abox;
  TripleGraph saturated;   // merged + saturated, before gateway synthesis
  TripleGraph graph;       // after gateway synthesis
  std::vector<CheckResult> checks;
  BpmnModel model;
  MatrixReport report;
  DiPlane plane;
  std::string xml;
  std::string svg;
};

/// Run the full pipeline in-process, keeping every intermediate stage.
inline PipelineArtifacts run_pipeline(const std::string& json_text,
                                      const std::string& name = "input.json") {
  const LoadedConfig& loaded = bundled_config();
  PipelineArtifacts out;
  out.spec = parse_spec(json_text, name);
  out.abox = lift(out.spec, loaded.mappings, loaded.instance_base);
  TripleGraph merged = loaded.tbox;
  for (const auto& [t, l] : out.abox.all()) {
    (void)l;
    merged.insert(t, Layer::abox);
  }
  out.saturated = saturate(std::move(merged), loaded.rules).graph;
  out.graph = synthesize_gateways(out.saturated);
  out.checks = validate_kb(out.graph);
  if (!all_checks_pass(out.checks)) throw std::runtime_error("validation failed for " + name);
  out.model = build_model(out.graph, out.spec);
  out.report = matrix_report(out.spec, out.model);
  out.plane = layout(out.model);
  out.xml = to_bpmn_xml(out.model, out.plane);
  out.svg = to_svg(out.model, out.plane);
  return out;
}

// --- canonical hand-written inputs -----------------------------------------

/// Smallest valid flow: start s -> action a (human queue q1) -> end e.
inline std::string minimal_flow_json() {
  return R"({
    "specVersion": 1,
    "kind": "flow",
    "name": "minimal",
    "nodes": [
      {"id": "s", "role": "start", "label": "Start"},
      {"id": "a", "role": "action", "label": "Review", "queue": "q1"},
      {"id": "e", "role": "end", "label": "End"}
    ],
    "transitions": [
      {"id": "t1", "from": "s", "to": "a"},
      {"id": "t2", "from": "a", "to": "e"}
    ],
    "queues": [{"id": "q1", "label": "q1", "kind": "human"}]
  })";
}

/// Parallel diamond: a splits unguarded to b and c, both converge at d.
inline std::string diamond_json() {
  return R"({
    "specVersion": 1,
    "kind": "flow",
    "name": "diamond",
    "nodes": [
      {"id": "s", "role": "start"},
      {"id": "a", "role": "action", "queue": "q1"},
      {"id": "b", "role": "action", "queue": "q1"},
      {"id": "c", "role": "action", "queue": "q1"},
      {"id": "d", "role": "action", "queue": "q1"},
      {"id": "e", "role": "end"}
    ],
    "transitions": [
      {"id": "t0", "from": "s", "to": "a"},
      {"id": "t1", "from": "a", "to": "b"},
      {"id": "t2", "from": "a", "to": "c"},
      {"id": "t3", "from": "b", "to": "d"},
      {"id": "t4", "from": "c", "to": "d"},
      {"id": "t5", "from": "d", "to": "e"}
    ],
    "queues": [{"id": "q1", "label": "Clerks", "kind": "human"}]
  })";
}

// --- independent oracles ----------------------------------------------------

/// Reachability over the WorkflowSpec itself (breadth-first over declared
/// transitions), independent of the RDF pipeline.
inline bool spec_reachability_ok(const WorkflowSpec& spec) {
  std::map<std::string, std::vector<std::string>> succ, pred;
  for (const auto& t : spec.transitions) {
    succ[t.from].push_back(t.to);
    pred[t.to].push_back(t.from);
  }
  auto bfs = [&](const std::vector<std::string>& from,
                 std::map<std::string, std::vector<std::string>>& adj) {
    std::set<std::string> seen(from.begin(), from.end());
    std::vector<std::string> work(from.begin(), from.end());
    while (!work.empty()) {
      std::string cur = work.back();
      work.pop_back();
      for (const auto& n : adj[cur])
        if (seen.insert(n).second) work.push_back(n);
    }
    return seen;
  };
  std::vector<std::string> starts, ends;
  for (const auto& n : spec.nodes) {
    if (n.role == NodeRole::start) starts.push_back(n.id);
    if (n.role == NodeRole::end) ends.push_back(n.id);
  }
  std::set<std::string> fwd = bfs(starts, succ);
  std::set<std::string> bwd = bfs(ends, pred);
  for (const auto& n : spec.nodes)
    if (!fwd.count(n.id) || !bwd.count(n.id)) return false;
  return true;
}

/// Gateway demand directly from the spec: fan-out>=2 plus fan-in>=2 nodes.
inline std::size_t spec_gateway_demand(const WorkflowSpec& spec) {
  std::map<std::string, int> out_deg, in_deg;
  for (const auto& t : spec.transitions) {
    out_deg[t.from] += 1;
    in_deg[t.to] += 1;
  }
  std::size_t demand = 0;
  for (const auto& [id, n] : out_deg)
    if (n >= 2) ++demand;
  for (const auto& [id, n] : in_deg)
    if (n >= 2) ++demand;
  return demand;
}

/// Matrix-style transitive closure over a random class graph: reach[a][b]
/// iff a subclass/equivalence chain connects a to b.
struct ClosureOracle {
  std::vector<std::string> classes;
  std::map<std::string, std::size_t> idx;
  std::vector<std::vector<bool>> reach;

  explicit ClosureOracle(const std::vector<std::string>& class_names) : classes(class_names) {
    for (std::size_t i = 0; i < classes.size(); ++i) idx[classes[i]] = i;
    reach.assign(classes.size(), std::vector<bool>(classes.size(), false));
    for (std::size_t i = 0; i < classes.size(); ++i) reach[i][i] = true;
  }
  void add_subclass(const std::string& a, const std::string& b) { reach[idx.at(a)][idx.at(b)] = true; }
  void add_equivalent(const std::string& a, const std::string& b) {
    reach[idx.at(a)][idx.at(b)] = true;
    reach[idx.at(b)][idx.at(a)] = true;
  }
  void close() {
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (std::size_t i = 0; i < classes.size(); ++i)
        if (reach[i][k])
          for (std::size_t j = 0; j < classes.size(); ++j)
            if (reach[k][j]) reach[i][j] = true;
  }
  /// All classes an individual with the given asserted types must carry.
  std::set<std::string> types_of(const std::set<std::string>& asserted) const {
    std::set<std::string> out;
    for (const auto& a : asserted)
      for (std::size_t j = 0; j < classes.size(); ++j)
        if (reach[idx.at(a)][j]) out.insert(classes[j]);
    return out;
  }
};

// --- geometry oracles --------------------------------------------------------

inline bool rects_overlap(const DiShape& a, const DiShape& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

/// Zero pairwise overlaps among node shapes (open rectangles).
inline bool no_shape_overlaps(const DiPlane& plane) {
  for (std::size_t i = 0; i < plane.shapes.size(); ++i)
    for (std::size_t j = i + 1; j < plane.shapes.size(); ++j)
      if (rects_overlap(plane.shapes[i], plane.shapes[j])) return false;
  return true;
}

/// Every node shape fully inside the band of its lane (or the pool when the
/// model has no lanes).
inline bool lanes_contain_shapes(const BpmnModel& model, const DiPlane& plane) {
  const BpmnProcess& proc = model.processes.front();
  for (const auto& s : plane.shapes) {
    const BpmnFlowNode* node = proc.find_node(s.element_id);
    if (!node) return false;
    double top = plane.pool_y, bottom = plane.pool_y + plane.pool_h;
    if (!node->lane_id.empty()) {
      bool found = false;
      for (const auto& band : plane.bands)
        if (band.lane_id == node->lane_id) {
          top = band.y_top;
          bottom = band.y_top + band.height;
          found = true;
        }
      if (!found) return false;
    }
    if (s.y < top || s.y + s.h > bottom) return false;
    if (s.x < plane.pool_x || s.x + s.w > plane.pool_x + plane.pool_w) return false;
  }
  return true;
}

/// Pairwise interpolated crossing count over the forward edges of a layouted
/// model; columns are recovered from shape x positions.
inline long count_crossings_oracle(const BpmnModel& model, const DiPlane& plane,
                                   const std::set<std::string>& back_edge_flow_ids = {}) {
  const BpmnProcess& proc = model.processes.front();
  struct E {
    double x0, y0, x1, y1;
    int r0, r1;
  };
  std::map<double, int> column_of;
  {
    std::set<double> xs;
    for (const auto& s : plane.shapes) xs.insert(s.x);
    int rank = 0;
    for (double x : xs) column_of[x] = rank++;
  }
  std::vector<E> segs;
  for (const auto& f : proc.flows) {
    if (back_edge_flow_ids.count(f.id)) continue;
    const DiShape* a = plane.find_shape(f.source_id);
    const DiShape* b = plane.find_shape(f.target_id);
    if (!a || !b) continue;
    E e;
    e.x0 = a->cx();
    e.y0 = a->cy();
    e.x1 = b->cx();
    e.y1 = b->cy();
    e.r0 = column_of.at(a->x);
    e.r1 = column_of.at(b->x);
    if (e.r1 < e.r0) continue;  // rendered back edge
    segs.push_back(e);
  }
  auto y_at = [](const E& e, double r) {
    if (e.r1 == e.r0) return e.y0;
    double f = (r - e.r0) / static_cast<double>(e.r1 - e.r0);
    return e.y0 + (e.y1 - e.y0) * f;
  };
  long crossings = 0;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      int lo = std::max(segs[i].r0, segs[j].r0);
      int hi = std::min(segs[i].r1, segs[j].r1);
      for (int r = lo; r < hi; ++r) {
        double d1 = y_at(segs[i], r) - y_at(segs[j], r);
        double d2 = y_at(segs[i], r + 1) - y_at(segs[j], r + 1);
        if (d1 * d2 < 0) ++crossings;
      }
    }
  return crossings;
}

}  // namespace testsupport
