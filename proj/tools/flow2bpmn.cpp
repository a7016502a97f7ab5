#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flow2bpmn/batch.hpp"
#include "flow2bpmn/corpus.hpp"

namespace fs = std::filesystem;
using namespace flow2bpmn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitConfig = 2;

std::optional<fs::path> ontology_dir_from_env() {
  const char* dir = std::getenv("FLOW2BPMN_ONTOLOGY_DIR");
  if (!dir || !*dir) return std::nullopt;
  return fs::path(dir);
}

void apply_ontology_defaults(PipelineConfig& config, bool want_rules) {
  if (config.ontology_paths.empty()) {
    if (auto dir = ontology_dir_from_env()) {
      config.ontology_paths = {*dir / "smartflow.ttl", *dir / "bpmn_bbo.ttl",
                               *dir / "bridge.ttl"};
    }
  }
  if (want_rules && !config.rules_path) {
    if (auto dir = ontology_dir_from_env()) {
      fs::path rules = *dir / "rules.ttl";
      if (fs::exists(rules)) config.rules_path = rules;
    }
  }
}

int run_convert(const std::string& input, PipelineConfig& config) {
  apply_ontology_defaults(config, true);
  fs::path in(input);
  try {
    if (fs::is_directory(in)) {
      BatchSummary summary = convert_dir(in, config);
      std::cout << summary.to_json().dump(2) << std::endl;
      return exit_code_for(summary);
    }
    if (!fs::exists(in)) fail(ErrorCode::Config, "input does not exist: " + input);
    LoadedConfig loaded = load_config(config);
    FileResult result = convert_one(in, loaded, config);
    std::cout << result.to_json().dump(2) << std::endl;
    if (config.log_path) {
      std::ofstream log(*config.log_path, std::ios::binary | std::ios::app);
      log << result.to_json().dump() << "\n";
    }
    return result.ok ? kExitOk : kExitFailures;
  } catch (const PipelineError& e) {
    std::cerr << e.what() << std::endl;
    return e.code() == ErrorCode::Config ? kExitConfig : kExitFailures;
  }
}

int run_validate(const std::string& input, PipelineConfig& config) {
  apply_ontology_defaults(config, true);
  fs::path in(input);
  try {
    LoadedConfig loaded = load_config(config);
    std::vector<fs::path> files;
    if (fs::is_directory(in))
      files = discover_inputs(in);
    else if (fs::exists(in))
      files.push_back(in);
    else
      fail(ErrorCode::Config, "input does not exist: " + input);

    bool any_failed = false;
    for (const auto& file : files) {
      try {
        WorkflowSpec spec = parse_spec(batch_detail::read_file(file), file.string());
        TripleGraph abox = lift(spec, loaded.mappings, loaded.instance_base);
        TripleGraph merged = loaded.tbox;
        for (const auto& [t, l] : abox.all()) {
          (void)l;
          merged.insert(t, Layer::abox);
        }
        SaturationResult sat = saturate(std::move(merged), loaded.rules);
        TripleGraph graph = synthesize_gateways(std::move(sat.graph));
        std::vector<CheckResult> checks = validate_kb(graph);
        for (const auto& check : checks) {
          std::cout << file.string() << " " << check_name(check.id) << " "
                    << (check.passed ? "pass" : "fail") << "\n";
          for (const auto& finding : check.findings)
            std::cout << "  " << finding.subject << ": " << finding.message << "\n";
        }
        if (!all_checks_pass(checks)) any_failed = true;
      } catch (const PipelineError& e) {
        std::cout << file.string() << " " << e.what() << "\n";
        any_failed = true;
      }
    }
    return any_failed ? kExitFailures : kExitOk;
  } catch (const PipelineError& e) {
    std::cerr << e.what() << std::endl;
    return e.code() == ErrorCode::Config ? kExitConfig : kExitFailures;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow2bpmn: workflow/form JSON to BPMN 2.0 converter"};
  app.require_subcommand(1);

  // convert
  std::string convert_input;
  PipelineConfig convert_config;
  std::vector<std::string> ontology_args;
  std::string rules_arg, log_arg, mappings_arg, out_arg;
  auto* convert = app.add_subcommand("convert", "Convert a file or directory to BPMN");
  convert->add_option("input", convert_input, "Input .json file or directory")->required();
  convert->add_option("--out", out_arg, "Output directory")->required();
  convert->add_option("--mappings", mappings_arg, "RML mapping file")->required();
  convert->add_option("--ontology", ontology_args,
                      "Ontology files (domain, bpmn, bridge); defaults from "
                      "FLOW2BPMN_ONTOLOGY_DIR");
  convert->add_option("--rules", rules_arg, "Rule file");
  convert->add_flag("--svg", convert_config.svg, "Also emit an SVG rendering");
  convert->add_flag("--report", convert_config.report, "Also emit per-file matrix reports");
  convert->add_option("--workers", convert_config.workers, "Worker count (default: cores)");
  convert->add_option("--log", log_arg, "JSON-lines log path");
  convert->add_option("--base", convert_config.instance_base, "Instance IRI base prefix");

  // validate
  std::string validate_input;
  PipelineConfig validate_config;
  std::vector<std::string> validate_ontologies;
  std::string validate_rules, validate_mappings;
  auto* validate = app.add_subcommand("validate", "Run the pipeline up to validation");
  validate->add_option("input", validate_input, "Input .json file or directory")->required();
  validate->add_option("--mappings", validate_mappings, "RML mapping file")->required();
  validate->add_option("--ontology", validate_ontologies, "Ontology files");
  validate->add_option("--rules", validate_rules, "Rule file");
  validate->add_option("--base", validate_config.instance_base, "Instance IRI base prefix");

  // gen-corpus
  CorpusOptions corpus_options;
  std::string corpus_out;
  std::string defect_list;
  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic spec corpus");
  gen->add_option("--seed", corpus_options.seed, "PRNG seed")->required();
  gen->add_option("--count", corpus_options.count, "Number of files")->required();
  gen->add_option("--min-size", corpus_options.min_size, "Minimum elements per file");
  gen->add_option("--max-size", corpus_options.max_size, "Maximum elements per file");
  gen->add_option("--out", corpus_out, "Output directory")->required();
  gen->add_option("--inject-defects", defect_list,
                  "Comma-separated defect classes (timer,dangling)");
  gen->add_option("--defect-count", corpus_options.defect_count,
                  "Defective file count (default: 5.8% of count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  if (convert->parsed()) {
    convert_config.out_dir = out_arg;
    convert_config.mappings_path = mappings_arg;
    for (const auto& p : ontology_args) convert_config.ontology_paths.emplace_back(p);
    if (!rules_arg.empty()) convert_config.rules_path = rules_arg;
    if (!log_arg.empty()) convert_config.log_path = log_arg;
    return run_convert(convert_input, convert_config);
  }
  if (validate->parsed()) {
    validate_config.mappings_path = validate_mappings;
    for (const auto& p : validate_ontologies) validate_config.ontology_paths.emplace_back(p);
    if (!validate_rules.empty()) validate_config.rules_path = validate_rules;
    return run_validate(validate_input, validate_config);
  }
  if (gen->parsed()) {
    try {
      if (!defect_list.empty()) {
        std::string token;
        std::istringstream ss(defect_list);
        while (std::getline(ss, token, ','))
          if (!token.empty()) corpus_options.defect_classes.push_back(token);
      }
      CorpusManifest manifest = corpus_generate(corpus_options, corpus_out);
      std::cout << "generated " << manifest.files.size() << " files in " << corpus_out
                << std::endl;
      return kExitOk;
    } catch (const PipelineError& e) {
      std::cerr << e.what() << std::endl;
      return kExitConfig;
    }
  }
  return kExitConfig;
}
