#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow2bpmn/errors.hpp"

namespace flow2bpmn {

struct CorpusOptions {
  std::uint64_t seed = 1;
  int count = 0;
  int min_size = 20;  // elements = nodes + transitions
  int max_size = 80;
  std::vector<std::string> defect_classes;  // subset of {"timer", "dangling"}
  int defect_count = -1;                    // -1: round(count * 5.8 %)
};

struct CorpusFileInfo {
  std::string file;
  std::string kind;
  std::string name;
  int nodes = 0;
  int action_nodes = 0;
  int start_nodes = 0;
  int end_nodes = 0;
  int transitions = 0;
  int queues_declared = 0;
  int human_queues_referenced = 0;
  int forms = 0;
  int processors = 0;
  int elements = 0;
  int gateway_demand = 0;  // fan-out>=2 nodes + fan-in>=2 nodes
  std::string defect;          // "", "timer", "dangling"
  std::string expected_error;  // "", "E_TIMER_UNSUPPORTED", "E_UNRESOLVED_NODE"

  nlohmann::json to_json() const {
    return nlohmann::json{{"file", file},
                          {"kind", kind},
                          {"name", name},
                          {"nodes", nodes},
                          {"actionNodes", action_nodes},
                          {"startNodes", start_nodes},
                          {"endNodes", end_nodes},
                          {"transitions", transitions},
                          {"queuesDeclared", queues_declared},
                          {"humanQueuesReferenced", human_queues_referenced},
                          {"forms", forms},
                          {"processors", processors},
                          {"elements", elements},
                          {"gatewayDemand", gateway_demand},
                          {"defect", defect},
                          {"expectedError", expected_error}};
  }
};

struct CorpusManifest {
  std::vector<CorpusFileInfo> files;

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    long long nodes = 0, transitions = 0, elements = 0;
    int clean = 0, defective = 0;
    for (const auto& f : files) {
      arr.push_back(f.to_json());
      nodes += f.nodes;
      transitions += f.transitions;
      elements += f.elements;
      f.defect.empty() ? ++clean : ++defective;
    }
    return nlohmann::json{{"files", arr},
                          {"totals",
                           {{"files", files.size()},
                            {"nodes", nodes},
                            {"transitions", transitions},
                            {"elements", elements},
                            {"clean", clean},
                            {"defective", defective}}}};
  }
};

inline const char* kManifestFileName = "corpus_manifest.json";

namespace corpus_detail {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  // Modulo keeps the stream identical across platforms; the bias is
  // irrelevant for corpus generation.
  int range(int lo, int hi) { return lo + static_cast<int>(eng() % (hi - lo + 1)); }
  bool chance(int percent) { return range(1, 100) <= percent; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
};

inline std::string zero_pad(int n, int width) {
  std::string s = std::to_string(n);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

inline const std::vector<std::string>& queue_labels() {
  static const std::vector<std::string> v = {
      "Front Office", "Back Office", "Finance", "Registry", "Academic Services",
      "Human Resources", "Legal", "IT Support"};
  return v;
}

inline const std::vector<std::string>& processor_names() {
  static const std::vector<std::string> v = {
      "NotifyProcessor", "SyncProcessor", "ArchiveProcessor", "SignProcessor",
      "ExportProcessor", "ValidateProcessor"};
  return v;
}

inline const std::vector<std::string>& guard_templates() {
  static const std::vector<std::string> v = {
      "state == 'approved'", "state == 'rejected'", "amount > 100", "priority >= 3",
      "hasAttachment", "requester.internal"};
  return v;
}

}  // namespace corpus_detail

/// Deterministic synthetic spec generator with ground-truth bookkeeping.
/// Same options, byte-identical corpus.
inline CorpusManifest corpus_generate(const CorpusOptions& options,
                                      const std::filesystem::path& out_dir) {
  namespace d = corpus_detail;
  using nlohmann::json;

  if (options.count < 0) fail(ErrorCode::Range, "count must be >= 0");
  if (options.min_size < 3 || options.max_size > 120 || options.min_size > options.max_size)
    fail(ErrorCode::Range, "size range must lie within [3, 120]");
  for (const auto& cls : options.defect_classes)
    if (cls != "timer" && cls != "dangling")
      fail(ErrorCode::Range, "unknown defect class '" + cls + "'");

  std::filesystem::create_directories(out_dir);
  d::Rng rng(options.seed);

  // Which files carry which defect.
  int defect_count = options.defect_count;
  if (defect_count < 0)
    defect_count = options.defect_classes.empty()
                       ? 0
                       : static_cast<int>(std::llround(options.count * 0.058));
  if (options.defect_classes.empty()) defect_count = 0;
  defect_count = std::min(defect_count, options.count);
  std::map<int, std::string> defect_for;  // file index -> class
  {
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < defect_count)
      chosen.insert(rng.range(0, options.count - 1));
    int k = 0;
    for (int idx : chosen)
      defect_for[idx] = options.defect_classes[k++ % options.defect_classes.size()];
  }

  CorpusManifest manifest;

  for (int file_idx = 0; file_idx < options.count; ++file_idx) {
    int target = rng.range(options.min_size, options.max_size);
    bool request_kind = rng.chance(20);

    // Queue pool.
    int humans = rng.range(1, 3);
    int systems = rng.range(0, 2);
    struct Q {
      std::string id, label, kind;
    };
    std::vector<Q> queues;
    for (int i = 0; i < humans; ++i)
      queues.push_back(Q{"q_h" + std::to_string(i), d::queue_labels()[static_cast<std::size_t>(
                                                        rng.range(0, 7))],
                         "human"});
    for (int i = 0; i < systems; ++i)
      queues.push_back(Q{"q_s" + std::to_string(i), "System Queue " + std::to_string(i),
                         "system"});

    std::vector<std::string> catalogue;
    int num_procs = rng.range(2, 4);
    for (int i = 0; i < num_procs; ++i)
      catalogue.push_back(d::processor_names()[static_cast<std::size_t>(i)]);

    // Layered DAG of action nodes between one start and one end.
    struct Node {
      std::string id;
      std::string role;
      std::string queue;      // may be empty
      std::string processor;  // may be empty
    };
    struct Edge {
      std::string id, from, to, guard;
      bool button = false;
    };
    std::vector<Node> nodes_out;
    std::vector<Edge> edges_out;
    std::vector<std::vector<std::string>> layers;

    nodes_out.push_back(Node{"start", "start", "", ""});
    layers.push_back({"start"});

    int action_counter = 0;
    auto elements_now = [&]() {
      return static_cast<int>(nodes_out.size() + edges_out.size());
    };
    auto connect_layers = [&](const std::vector<std::string>& from,
                              const std::vector<std::string>& to) {
      auto add_edge = [&](const std::string& a, const std::string& b) {
        edges_out.push_back(
            Edge{"t" + std::to_string(edges_out.size()), a, b, "", false});
      };
      if (from.size() == 1) {
        for (const auto& b : to) add_edge(from[0], b);
      } else if (to.size() == 1) {
        for (const auto& a : from) add_edge(a, to[0]);
      } else {
        for (std::size_t i = 0; i < from.size(); ++i)
          add_edge(from[i], to[i % to.size()]);
        for (std::size_t i = from.size(); i < to.size(); ++i)
          add_edge(from[i % from.size()], to[i]);
      }
    };

    // Keep roughly 3 elements of headroom for the end node and its edges.
    while (elements_now() + 4 < target) {
      int width;
      int roll = rng.range(1, 100);
      if (roll <= 60)
        width = 1;
      else if (roll <= 90)
        width = 2;
      else
        width = 3;
      std::vector<std::string> layer;
      for (int i = 0; i < width; ++i) {
        Node n;
        n.id = "a" + std::to_string(action_counter++);
        n.role = "action";
        int mix = rng.range(1, 100);
        if (mix <= 70) {
          n.queue = queues[static_cast<std::size_t>(rng.range(0, humans - 1))].id;
          if (rng.chance(15)) n.processor = rng.pick(catalogue);
        } else if (mix <= 90 || systems == 0) {
          n.processor = rng.pick(catalogue);
        } else {
          n.processor = rng.pick(catalogue);
          n.queue = queues[static_cast<std::size_t>(humans + rng.range(0, systems - 1))].id;
        }
        nodes_out.push_back(n);
        layer.push_back(n.id);
      }
      connect_layers(layers.back(), layer);
      layers.push_back(std::move(layer));
    }
    nodes_out.push_back(Node{"end", "end", "", ""});
    connect_layers(layers.back(), {"end"});
    layers.push_back({"end"});

    // Guards on split fan-outs: all, none, or mixed (default flow case).
    std::map<std::string, std::vector<std::size_t>> out_edges;
    for (std::size_t i = 0; i < edges_out.size(); ++i)
      out_edges[edges_out[i].from].push_back(i);
    for (const auto& [from, idxs] : out_edges) {
      if (idxs.size() < 2) continue;
      int style = rng.range(1, 100);
      if (style <= 50) {
        for (auto i : idxs) edges_out[i].guard = rng.pick(d::guard_templates());
      } else if (style <= 80) {
        // parallel: leave unguarded
      } else {
        for (std::size_t k = 1; k < idxs.size(); ++k)
          edges_out[idxs[k]].guard = rng.pick(d::guard_templates());
      }
    }

    // Occasional button-triggered transition out of an action node.
    struct Button {
      std::string node, label, transition;
    };
    std::vector<Button> buttons;
    for (auto& e : edges_out) {
      if (e.from == "start" || !e.guard.empty()) continue;
      if (out_edges.at(e.from).size() != 1) continue;
      if (!rng.chance(12)) continue;
      e.button = true;
      buttons.push_back(Button{e.from, "Submit", e.id});
    }

    // Forms: request files always carry one, flow files sometimes.
    bool with_form = request_kind || rng.chance(25);
    std::string form_node;
    if (with_form) {
      for (const auto& n : nodes_out)
        if (n.role == "action" && n.queue.rfind("q_h", 0) == 0) {
          form_node = n.id;
          break;
        }
      if (form_node.empty()) with_form = false;
    }

    // Defect injection.
    std::string defect =
        defect_for.count(file_idx) ? defect_for.at(file_idx) : std::string();
    std::string expected_error;
    if (defect == "timer" && !edges_out.empty()) {
      expected_error = "E_TIMER_UNSUPPORTED";
    } else if (defect == "dangling" && !edges_out.empty()) {
      expected_error = "E_UNRESOLVED_NODE";
    } else {
      defect.clear();
    }

    std::string name = (request_kind ? "request_" : "workflow_") + d::zero_pad(file_idx, 3);
    json doc;
    doc["specVersion"] = 1;
    doc["kind"] = request_kind ? "request" : "flow";
    doc["name"] = name;

    json jnodes = json::array();
    for (const auto& n : nodes_out) {
      json jn;
      jn["id"] = n.id;
      jn["role"] = n.role;
      jn["label"] = n.role == "action" ? "Step " + n.id : (n.role == "start" ? "Start" : "End");
      if (!n.queue.empty()) jn["queue"] = n.queue;
      if (!n.processor.empty()) jn["processor"] = n.processor;
      if (with_form && n.id == form_node) jn["form"] = "f0";
      json jbuttons = json::array();
      for (const auto& b : buttons)
        if (b.node == n.id)
          jbuttons.push_back(json{{"label", b.label}, {"transition", b.transition}});
      if (!jbuttons.empty()) jn["buttons"] = jbuttons;
      jnodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(jnodes);

    int defect_edge = edges_out.empty() ? -1 : rng.range(0, static_cast<int>(edges_out.size()) - 1);
    json jtrans = json::array();
    for (std::size_t i = 0; i < edges_out.size(); ++i) {
      const auto& e = edges_out[i];
      json jt;
      jt["id"] = e.id;
      jt["from"] = e.from;
      jt["to"] = e.to;
      if (!e.guard.empty()) jt["guard"] = e.guard;
      if (e.button) jt["trigger"] = "button";
      if (defect == "timer" && static_cast<int>(i) == defect_edge) {
        jt["trigger"] = "timer";
        jt.erase("guard");
      }
      if (defect == "dangling" && static_cast<int>(i) == defect_edge)
        jt["to"] = "ghost_node";
      jtrans.push_back(std::move(jt));
    }
    doc["transitions"] = std::move(jtrans);

    // Declare only referenced queues plus occasionally an unused one.
    std::set<std::string> used_queues;
    for (const auto& n : nodes_out)
      if (!n.queue.empty()) used_queues.insert(n.queue);
    json jqueues = json::array();
    int queues_declared = 0;
    for (const auto& q : queues) {
      if (!used_queues.count(q.id) && !rng.chance(20)) continue;
      jqueues.push_back(json{{"id", q.id}, {"label", q.label}, {"kind", q.kind}});
      ++queues_declared;
    }
    doc["queues"] = std::move(jqueues);

    if (with_form) {
      doc["forms"] = json::array(
          {json{{"id", "f0"},
                {"title", "Request form"},
                {"fields", json::array({json{{"name", "subject"}, {"type", "text"}},
                                        json{{"name", "justification"}, {"type", "textarea"}}})}}});
    }
    doc["processors"] = catalogue;

    std::string file_name = "spec_" + d::zero_pad(file_idx, 3) + ".json";
    {
      std::ofstream out(out_dir / file_name, std::ios::binary);
      out << doc.dump(2) << "\n";
    }

    // Ground-truth bookkeeping, computed from the generator's own structures
    // (defect rewrites do not change counts).
    CorpusFileInfo info;
    info.file = file_name;
    info.kind = request_kind ? "request" : "flow";
    info.name = name;
    info.nodes = static_cast<int>(nodes_out.size());
    info.start_nodes = 1;
    info.end_nodes = 1;
    info.action_nodes = info.nodes - 2;
    info.transitions = static_cast<int>(edges_out.size());
    info.queues_declared = queues_declared;
    {
      std::set<std::string> humans_ref;
      for (const auto& n : nodes_out)
        if (!n.queue.empty() && n.queue.rfind("q_h", 0) == 0) humans_ref.insert(n.queue);
      info.human_queues_referenced = static_cast<int>(humans_ref.size());
    }
    info.forms = with_form ? 1 : 0;
    info.processors = static_cast<int>(catalogue.size());
    info.elements = info.nodes + info.transitions;
    {
      std::map<std::string, int> in_deg, out_deg;
      for (const auto& e : edges_out) {
        out_deg[e.from] += 1;
        in_deg[e.to] += 1;
      }
      for (const auto& [id, n] : out_deg)
        if (n >= 2) info.gateway_demand += 1;
      for (const auto& [id, n] : in_deg)
        if (n >= 2) info.gateway_demand += 1;
    }
    info.defect = defect;
    info.expected_error = expected_error;
    manifest.files.push_back(std::move(info));
  }

  {
    std::ofstream out(out_dir / kManifestFileName, std::ios::binary);
    out << manifest.to_json().dump(2) << "\n";
  }
  return manifest;
}

}  // namespace flow2bpmn
