#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "flow2bpmn/builder.hpp"
#include "flow2bpmn/corpus.hpp"
#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/ingest.hpp"
#include "flow2bpmn/kb.hpp"
#include "flow2bpmn/layout.hpp"
#include "flow2bpmn/lifting.hpp"
#include "flow2bpmn/mapping.hpp"
#include "flow2bpmn/reasoner.hpp"
#include "flow2bpmn/rules.hpp"
#include "flow2bpmn/serializer.hpp"
#include "flow2bpmn/validator.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

struct PipelineConfig {
  std::filesystem::path mappings_path;
  std::vector<std::filesystem::path> ontology_paths;  // domain, bpmn, bridge order
  std::optional<std::filesystem::path> rules_path;
  std::filesystem::path out_dir;
  bool svg = false;
  bool report = false;
  int workers = 0;  // <= 0: hardware concurrency
  std::string instance_base = vocab::kDefaultInstanceBase;
  std::optional<std::filesystem::path> log_path;
};

/// Ontologies, mappings and rules loaded once and shared read-only across
/// workers.
struct LoadedConfig {
  MappingRuleSet mappings;
  TripleGraph tbox;  // merged domain + bpmn + bridge + rule graph
  std::vector<RuleLite> rules;
  std::string instance_base;
};

struct StageFinding {
  std::string check;
  std::string subject;
  std::string message;
};

struct FileResult {
  std::string input;
  bool ok = false;
  std::string error_class;  // empty when ok
  std::string message;
  std::vector<std::string> outputs;
  std::map<std::string, long long> timings_ms;  // parse/lift/reason/validate/build/layout/serialize
  long long total_ms = 0;
  std::map<std::string, long long> counts;
  std::vector<StageFinding> findings;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["input"] = input;
    j["status"] = ok ? "ok" : "failed";
    if (!ok) j["error"] = error_class;
    if (!message.empty()) j["message"] = message;
    j["outputs"] = outputs;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [k, v] : timings_ms) t[k] = v;
    t["total"] = total_ms;
    j["timingsMs"] = t;
    j["counts"] = counts;
    nlohmann::json f = nlohmann::json::array();
    for (const auto& fd : findings)
      f.push_back({{"check", fd.check}, {"subject", fd.subject}, {"message", fd.message}});
    j["findings"] = f;
    return j;
  }
};

struct BatchSummary {
  std::size_t discovered = 0;
  std::size_t attempted = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  double success_rate = 1.0;
  std::size_t diagrams_produced = 0;
  long long mean_ms = 0;
  long long median_ms = 0;
  long long max_ms = 0;
  std::map<std::string, std::size_t> failures_by_class;
  std::vector<std::string> warnings;
  std::vector<FileResult> results;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["discovered"] = discovered;
    j["attempted"] = attempted;
    j["succeeded"] = succeeded;
    j["failed"] = failed;
    j["successRate"] = success_rate;
    j["diagramsProduced"] = diagrams_produced;
    j["timingMs"] = {{"mean", mean_ms}, {"median", median_ms}, {"max", max_ms}};
    nlohmann::json by_class = nlohmann::json::object();
    for (const auto& [k, v] : failures_by_class) by_class[k] = v;
    j["failuresByClass"] = by_class;
    j["warnings"] = warnings;
    return j;
  }
};

namespace batch_detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Config, "cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << bytes;
  }
  std::filesystem::rename(tmp, path);
}

/// Optional sidecar catalogue next to the input: processor name ->
/// description, used only to label processor nodes that have no explicit
/// label of their own.
inline std::map<std::string, std::string> load_processor_sidecar(
    const std::filesystem::path& input) {
  std::map<std::string, std::string> out;
  std::filesystem::path sidecar = input.parent_path() / "processors.json";
  std::error_code ec;
  if (!std::filesystem::exists(sidecar, ec)) return out;
  try {
    nlohmann::json j = nlohmann::json::parse(read_file(sidecar));
    if (j.is_object())
      for (auto it = j.begin(); it != j.end(); ++it)
        if (it.value().is_string()) out[it.key()] = it.value().get<std::string>();
  } catch (...) {
    // A broken sidecar only costs the labels.
  }
  return out;
}

struct StageClock {
  using clock = std::chrono::steady_clock;
  clock::time_point t0 = clock::now();
  clock::time_point stage_start = clock::now();

  long long lap_ms() {
    auto now = clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - stage_start).count();
    stage_start = now;
    return ms;
  }
  long long total_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
  }
};

}  // namespace batch_detail

inline LoadedConfig load_config(const PipelineConfig& config) {
  namespace d = batch_detail;
  if (config.ontology_paths.empty())
    fail(ErrorCode::Config, "no ontology files given");
  for (const auto& p : config.ontology_paths)
    if (!std::filesystem::exists(p)) fail(ErrorCode::Config, "missing ontology file: " + p.string());
  if (!std::filesystem::exists(config.mappings_path))
    fail(ErrorCode::Config, "missing mapping file: " + config.mappings_path.string());
  if (config.rules_path && !std::filesystem::exists(*config.rules_path))
    fail(ErrorCode::Config, "missing rules file: " + config.rules_path->string());

  LoadedConfig loaded;
  loaded.instance_base = config.instance_base;
  try {
    loaded.mappings = load_mappings(d::read_file(config.mappings_path));
  } catch (const PipelineError& e) {
    fail(ErrorCode::Config, "mapping file " + config.mappings_path.string() + ": " + e.what());
  }

  std::vector<OntologyLayer> layers;
  for (std::size_t i = 0; i < config.ontology_paths.size(); ++i) {
    Layer tag = i == 0 ? Layer::domain : (i == 1 ? Layer::bpmn : Layer::mapping);
    try {
      layers.push_back(parse_layer(d::read_file(config.ontology_paths[i]), tag));
    } catch (const PipelineError& e) {
      fail(ErrorCode::Config,
           "ontology file " + config.ontology_paths[i].string() + ": " + e.what());
    }
  }
  if (config.rules_path) {
    try {
      OntologyLayer rule_layer = parse_layer(d::read_file(*config.rules_path), Layer::mapping);
      loaded.rules = extract_rules(rule_layer.graph);
      layers.push_back(std::move(rule_layer));
    } catch (const PipelineError& e) {
      fail(ErrorCode::Config, "rules file " + config.rules_path->string() + ": " + e.what());
    }
  }
  loaded.tbox = merge(layers);
  return loaded;
}

/// Full pipeline over one file. Never throws for per-file failures; the
/// result carries the error class and diagnostics instead.
inline FileResult convert_one(const std::filesystem::path& input, const LoadedConfig& loaded,
                              const PipelineConfig& config) {
  namespace d = batch_detail;
  FileResult result;
  result.input = input.string();
  d::StageClock clock;

  try {
    std::string raw;
    try {
      raw = d::read_file(input);
    } catch (const PipelineError& e) {
      fail(ErrorCode::MalformedJson, e.detail());
    }

    WorkflowSpec spec = parse_spec(raw, input.string());
    auto sidecar = d::load_processor_sidecar(input);
    if (!sidecar.empty()) {
      for (auto& n : spec.nodes)
        if (n.processor && n.label == n.id && sidecar.count(*n.processor))
          n.label = sidecar.at(*n.processor);
    }
    result.timings_ms["parse"] = clock.lap_ms();

    TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
    result.timings_ms["lift"] = clock.lap_ms();

    TripleGraph merged = loaded.tbox;
    for (const auto& [t, l] : abox.all()) {
      (void)l;
      merged.insert(t, Layer::abox);
    }
    merged.merge_prefixes(abox);
    SaturationResult saturated = saturate(std::move(merged), loaded.rules);
    TripleGraph graph = synthesize_gateways(std::move(saturated.graph));
    result.timings_ms["reason"] = clock.lap_ms();

    std::vector<CheckResult> checks = validate_kb(graph);
    result.timings_ms["validate"] = clock.lap_ms();
    if (!all_checks_pass(checks)) {
      for (const auto& check : checks)
        for (const auto& finding : check.findings)
          result.findings.push_back(
              StageFinding{check_name(check.id), finding.subject, finding.message});
      std::string failing;
      for (const auto& check : checks)
        if (!check.passed) failing += failing.empty() ? check_name(check.id)
                                                      : std::string(", ") + check_name(check.id);
      result.ok = false;
      result.error_class = "E_VALIDATION";
      result.message = "validation failed: " + failing;
      result.total_ms = clock.total_ms();
      return result;
    }

    BpmnModel model = build_model(graph, spec);
    MatrixReport report = matrix_report(spec, model);
    result.timings_ms["build"] = clock.lap_ms();

    DiPlane plane = layout(model, default_params());
    result.timings_ms["layout"] = clock.lap_ms();

    std::string xml = to_bpmn_xml(model, plane);
    std::string svg;
    if (config.svg) svg = to_svg(model, plane);
    result.timings_ms["serialize"] = clock.lap_ms();

    std::filesystem::create_directories(config.out_dir);
    std::string stem = input.stem().string();
    std::filesystem::path bpmn_path = config.out_dir / (stem + ".bpmn");
    d::write_file_atomic(bpmn_path, xml);
    result.outputs.push_back(bpmn_path.string());
    if (config.svg) {
      std::filesystem::path svg_path = config.out_dir / (stem + ".svg");
      d::write_file_atomic(svg_path, svg);
      result.outputs.push_back(svg_path.string());
    }
    if (config.report) {
      std::filesystem::path report_path = config.out_dir / (stem + ".matrix.json");
      d::write_file_atomic(report_path, report.to_json().dump(2) + "\n");
      result.outputs.push_back(report_path.string());
    }

    const BpmnProcess& proc = model.processes.front();
    result.counts["nodes"] = static_cast<long long>(spec.nodes.size());
    result.counts["transitions"] = static_cast<long long>(spec.transitions.size());
    result.counts["elements"] =
        static_cast<long long>(spec.nodes.size() + spec.transitions.size());
    result.counts["flowNodes"] = static_cast<long long>(proc.nodes.size());
    result.counts["flows"] = static_cast<long long>(proc.flows.size());
    result.counts["gateways"] =
        static_cast<long long>(proc.count_kind(FlowNodeKind::exclusiveGateway) +
                               proc.count_kind(FlowNodeKind::parallelGateway));
    result.counts["lanes"] = static_cast<long long>(proc.lanes.size());

    result.ok = true;
    result.total_ms = clock.total_ms();
  } catch (const PipelineError& e) {
    result.ok = false;
    result.error_class = e.code_name();
    result.message = e.detail();
    result.total_ms = clock.total_ms();
  } catch (const std::exception& e) {
    result.ok = false;
    result.error_class = "E_INTERNAL";
    result.message = e.what();
    result.total_ms = clock.total_ms();
  }
  return result;
}

/// Recursively discover `*.json` sources, sorted lexicographically; tool
/// artifacts (manifest, sidecar catalogue, summaries, matrix reports) are
/// not inputs.
inline std::vector<std::filesystem::path> discover_inputs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::filesystem::path& p = entry.path();
    if (p.extension() != ".json") continue;
    std::string name = p.filename().string();
    if (name == kManifestFileName || name == "processors.json" || name == "summary.json")
      continue;
    if (name.size() > 12 && name.compare(name.size() - 12, 12, ".matrix.json") == 0) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.string() < b.string(); });
  return files;
}

inline BatchSummary convert_dir(const std::filesystem::path& dir, const PipelineConfig& config) {
  namespace d = batch_detail;
  if (!std::filesystem::exists(dir) || !std::filesystem::is_directory(dir))
    fail(ErrorCode::Config, "input directory does not exist: " + dir.string());
  LoadedConfig loaded = load_config(config);

  std::vector<std::filesystem::path> files = discover_inputs(dir);
  BatchSummary summary;
  summary.discovered = files.size();
  summary.attempted = files.size();
  summary.results.resize(files.size());

  unsigned workers = config.workers > 0
                         ? static_cast<unsigned>(config.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::max(1u, std::min<unsigned>(workers, files.empty() ? 1 : files.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) break;
      summary.results[i] = convert_one(files[i], loaded, config);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<long long> times;
  for (const auto& r : summary.results) {
    if (r.ok) {
      summary.succeeded += 1;
      times.push_back(r.total_ms);
    } else {
      summary.failed += 1;
      summary.failures_by_class[r.error_class] += 1;
    }
  }
  summary.diagrams_produced = summary.succeeded;
  if (summary.attempted == 0) {
    summary.success_rate = 1.0;
    summary.warnings.push_back("no input files discovered; success rate defined as 1.0");
  } else {
    summary.success_rate =
        static_cast<double>(summary.succeeded) / static_cast<double>(summary.attempted);
  }
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    long long sum = 0;
    for (long long t : times) sum += t;
    summary.mean_ms = sum / static_cast<long long>(times.size());
    summary.median_ms = times[times.size() / 2];
    summary.max_ms = times.back();
  }

  std::filesystem::create_directories(config.out_dir);
  d::write_file_atomic(config.out_dir / "summary.json", summary.to_json().dump(2) + "\n");
  std::filesystem::path log_path =
      config.log_path ? *config.log_path : config.out_dir / "conversion_log.jsonl";
  {
    std::string lines;
    for (const auto& r : summary.results) lines += r.to_json().dump() + "\n";
    d::write_file_atomic(log_path, lines);
  }
  return summary;
}

inline int exit_code_for(const BatchSummary& summary) { return summary.failed == 0 ? 0 : 1; }

}  // namespace flow2bpmn
