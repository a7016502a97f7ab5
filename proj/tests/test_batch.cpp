#include <doctest.h>

#include <fstream>

#include "support/helpers.hpp"

#include "flow2bpmn/corpus.hpp"

using namespace flow2bpmn;
namespace fs = std::filesystem;
using testsupport::data_dir;
using testsupport::fresh_temp_dir;
using testsupport::slurp;

namespace {

PipelineConfig bundled_pipeline_config(const fs::path& out_dir) {
  PipelineConfig config;
  config.mappings_path = data_dir() / "mappings" / "smartflow.ttl";
  config.ontology_paths = {data_dir() / "ontologies" / "smartflow.ttl",
                           data_dir() / "ontologies" / "bpmn_bbo.ttl",
                           data_dir() / "ontologies" / "bridge.ttl"};
  config.rules_path = data_dir() / "ontologies" / "rules.ttl";
  config.out_dir = out_dir;
  config.svg = true;
  config.report = true;
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("single file conversion produces outputs, timings and counts") {
  auto dir = fresh_temp_dir("batch_single");
  write_text(dir / "minimal.json", testsupport::minimal_flow_json());
  PipelineConfig config = bundled_pipeline_config(dir / "out");
  LoadedConfig loaded = load_config(config);

  FileResult result = convert_one(dir / "minimal.json", loaded, config);
  REQUIRE(result.ok);
  CHECK(result.error_class.empty());
  CHECK(result.outputs.size() == 3);  // .bpmn, .svg, .matrix.json
  CHECK(result.timings_ms.size() == 7);
  for (const char* stage :
       {"parse", "lift", "reason", "validate", "build", "layout", "serialize"})
    CHECK(result.timings_ms.count(stage) == 1);
  CHECK(result.counts.at("nodes") == 3);
  CHECK(result.counts.at("flows") == 2);
  for (const auto& out : result.outputs) CHECK(fs::exists(out));

  nlohmann::json line = result.to_json();
  CHECK(line.at("status") == "ok");
  CHECK(line.at("timingsMs").contains("total"));
}

TEST_CASE("failing files carry one error class and write no outputs") {
  auto dir = fresh_temp_dir("batch_failures");
  write_text(dir / "timer.json", R"({
    "specVersion": 1, "kind": "flow", "name": "timer",
    "nodes": [{"id":"s","role":"start"},{"id":"e","role":"end"}],
    "transitions": [{"id":"t1","from":"s","to":"e","trigger":"timer"}]
  })");
  write_text(dir / "dangling.json", R"({
    "specVersion": 1, "kind": "flow", "name": "dangling",
    "nodes": [{"id":"s","role":"start"},{"id":"e","role":"end"}],
    "transitions": [{"id":"t1","from":"s","to":"ghost"}]
  })");
  PipelineConfig config = bundled_pipeline_config(dir / "out");
  LoadedConfig loaded = load_config(config);

  FileResult timer = convert_one(dir / "timer.json", loaded, config);
  CHECK_FALSE(timer.ok);
  CHECK(timer.error_class == "E_TIMER_UNSUPPORTED");
  CHECK(timer.outputs.empty());
  CHECK_FALSE(fs::exists(dir / "out" / "timer.bpmn"));

  FileResult dangling = convert_one(dir / "dangling.json", loaded, config);
  CHECK_FALSE(dangling.ok);
  CHECK(dangling.error_class == "E_UNRESOLVED_NODE");
  CHECK(dangling.outputs.empty());
}

TEST_CASE("directory conversion isolates failures and reports the rate") {
  auto dir = fresh_temp_dir("batch_dir");
  CorpusOptions options;
  options.seed = 3;
  options.count = 10;
  options.min_size = 20;
  options.max_size = 40;
  corpus_generate(options, dir);
  write_text(dir / "zz_bad_timer.json", R"({
    "specVersion": 1, "kind": "flow", "name": "bad1",
    "nodes": [{"id":"s","role":"start"},{"id":"e","role":"end"}],
    "transitions": [{"id":"t1","from":"s","to":"e","trigger":"timer"}]
  })");
  write_text(dir / "zz_bad_dangling.json", R"({
    "specVersion": 1, "kind": "flow", "name": "bad2",
    "nodes": [{"id":"s","role":"start"},{"id":"e","role":"end"}],
    "transitions": [{"id":"t1","from":"s","to":"ghost"}]
  })");

  PipelineConfig config = bundled_pipeline_config(dir / "out");
  BatchSummary summary = convert_dir(dir, config);
  CHECK(summary.discovered == 12);
  CHECK(summary.attempted == 12);
  CHECK(summary.succeeded == 10);
  CHECK(summary.failed == 2);
  CHECK(summary.success_rate == doctest::Approx(10.0 / 12.0));
  CHECK(summary.failures_by_class.at("E_TIMER_UNSUPPORTED") == 1);
  CHECK(summary.failures_by_class.at("E_UNRESOLVED_NODE") == 1);
  CHECK(exit_code_for(summary) == 1);
  CHECK(summary.diagrams_produced == 10);

  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "conversion_log.jsonl"));

  // One log line per attempted file, in discovery order.
  std::istringstream log(slurp(dir / "out" / "conversion_log.jsonl"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(log, line))
    if (!line.empty()) {
      nlohmann::json j = nlohmann::json::parse(line);
      CHECK(j.contains("status"));
      ++lines;
    }
  CHECK(lines == 12);
}

TEST_CASE("empty directory counts as a vacuous success") {
  auto dir = fresh_temp_dir("batch_empty");
  PipelineConfig config = bundled_pipeline_config(dir / "out");
  BatchSummary summary = convert_dir(dir, config);
  CHECK(summary.attempted == 0);
  CHECK(summary.success_rate == 1.0);
  CHECK(exit_code_for(summary) == 0);
  CHECK_FALSE(summary.warnings.empty());
}

TEST_CASE("worker count does not change the output bytes") {
  auto dir = fresh_temp_dir("batch_workers");
  CorpusOptions options;
  options.seed = 9;
  options.count = 8;
  options.min_size = 20;
  options.max_size = 50;
  corpus_generate(options, dir);

  PipelineConfig serial = bundled_pipeline_config(dir / "out1");
  serial.workers = 1;
  PipelineConfig parallel = bundled_pipeline_config(dir / "out2");
  parallel.workers = 8;
  BatchSummary s1 = convert_dir(dir, serial);
  BatchSummary s2 = convert_dir(dir, parallel);
  CHECK(s1.succeeded == s2.succeeded);
  CHECK(s1.failed == s2.failed);

  for (const auto& entry : fs::directory_iterator(dir / "out1")) {
    std::string name = entry.path().filename().string();
    if (name == "summary.json" || name == "conversion_log.jsonl") continue;  // timings differ
    CHECK(slurp(entry.path()) == slurp(dir / "out2" / name));
  }
}

TEST_CASE("corpus generation is deterministic and bounded") {
  auto dir1 = fresh_temp_dir("corpus_det1");
  auto dir2 = fresh_temp_dir("corpus_det2");
  CorpusOptions options;
  options.seed = 42;
  options.count = 6;
  options.min_size = 20;
  options.max_size = 80;
  CorpusManifest m1 = corpus_generate(options, dir1);
  CorpusManifest m2 = corpus_generate(options, dir2);
  CHECK(m1.to_json() == m2.to_json());
  for (const auto& info : m1.files) CHECK(slurp(dir1 / info.file) == slurp(dir2 / info.file));

  for (const auto& info : m1.files) {
    CHECK(info.elements == info.nodes + info.transitions);
    CHECK(info.elements >= options.min_size - 4);
    CHECK(info.elements <= options.max_size + 4);
  }

  // Manifest totals match the per-file sums.
  nlohmann::json manifest = nlohmann::json::parse(slurp(dir1 / kManifestFileName));
  long long total_elements = 0;
  for (const auto& f : manifest.at("files")) total_elements += f.at("elements").get<long long>();
  CHECK(manifest.at("totals").at("elements").get<long long>() == total_elements);

  // Zero files, empty manifest.
  auto dir3 = fresh_temp_dir("corpus_zero");
  CorpusOptions zero = options;
  zero.count = 0;
  CorpusManifest m3 = corpus_generate(zero, dir3);
  CHECK(m3.files.empty());

  // Range violations.
  CorpusOptions bad = options;
  bad.min_size = 2;
  CHECK_THROWS_AS(corpus_generate(bad, fresh_temp_dir("corpus_bad1")), PipelineError);
  bad = options;
  bad.max_size = 200;
  CHECK_THROWS_AS(corpus_generate(bad, fresh_temp_dir("corpus_bad2")), PipelineError);
}

TEST_CASE("defect injection seeds exactly the requested classes") {
  auto dir = fresh_temp_dir("corpus_defects");
  CorpusOptions options;
  options.seed = 101;
  options.count = 20;
  options.min_size = 20;
  options.max_size = 40;
  options.defect_classes = {"timer", "dangling"};
  options.defect_count = 4;
  CorpusManifest manifest = corpus_generate(options, dir);

  int timers = 0, danglings = 0;
  for (const auto& info : manifest.files) {
    if (info.defect == "timer") {
      ++timers;
      CHECK(info.expected_error == "E_TIMER_UNSUPPORTED");
    } else if (info.defect == "dangling") {
      ++danglings;
      CHECK(info.expected_error == "E_UNRESOLVED_NODE");
    }
  }
  CHECK(timers == 2);
  CHECK(danglings == 2);

  PipelineConfig config = bundled_pipeline_config(dir / "out");
  BatchSummary summary = convert_dir(dir, config);
  CHECK(summary.failed == 4);
  CHECK(summary.succeeded == 16);
  for (std::size_t i = 0; i < manifest.files.size(); ++i) {
    const auto& info = manifest.files[i];
    const FileResult& result = summary.results[i];
    if (info.expected_error.empty())
      CHECK(result.ok);
    else
      CHECK(result.error_class == info.expected_error);
  }
}

TEST_CASE("missing configuration files are a config error") {
  PipelineConfig config;
  config.mappings_path = "/nonexistent/mappings.ttl";
  config.ontology_paths = {"/nonexistent/onto.ttl"};
  config.out_dir = fresh_temp_dir("batch_cfg");
  try {
    load_config(config);
    FAIL("expected failure");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("processor sidecar labels processor nodes without explicit labels") {
  auto dir = fresh_temp_dir("batch_sidecar");
  write_text(dir / "flow.json", R"({
    "specVersion": 1, "kind": "flow", "name": "side",
    "nodes": [
      {"id": "s", "role": "start"},
      {"id": "sync", "role": "action", "processor": "SyncProcessor"},
      {"id": "e", "role": "end"}
    ],
    "transitions": [
      {"id": "t1", "from": "s", "to": "sync"},
      {"id": "t2", "from": "sync", "to": "e"}
    ],
    "processors": ["SyncProcessor"]
  })");
  write_text(dir / "processors.json",
             R"({"SyncProcessor": "Synchronize with the records system"})");

  PipelineConfig config = bundled_pipeline_config(dir / "out");
  LoadedConfig loaded = load_config(config);
  FileResult result = convert_one(dir / "flow.json", loaded, config);
  REQUIRE(result.ok);
  std::string xml = slurp(dir / "out" / "flow.bpmn");
  CHECK(xml.find("Synchronize with the records system") != std::string::npos);

  // The sidecar itself is not discovered as an input.
  auto files = discover_inputs(dir);
  REQUIRE(files.size() == 1);
  CHECK(files[0].filename() == "flow.json");
}
