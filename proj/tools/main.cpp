// evotest command-line entry point.

#include <CLI11.hpp>

#include <iostream>

#include "evotest/commands.hpp"
#include "evotest/config.hpp"
#include "evotest/errors.hpp"

int main(int argc, char** argv) {
  using namespace evotest;

  CLI::App app{"Evolutionary unit-test generation for Python modules"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "evotest 0.1.0");

  std::vector<std::string> sources;
  std::string config_path;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--source,-s", sources, "Python source file(s) under test")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--config,-c", config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "Override a config key, e.g. --set stop.tau=0.01");
  };

  int jobs = 1;
  auto* run = app.add_subcommand("run", "Search for edge cases and synthesize a test file");
  add_common(run);
  run->add_option("--jobs,-j", jobs, "Sources processed in parallel")
      ->check(CLI::Range(1, 256));

  int shots = 0;
  bool cot = false;
  bool all_modes = false;
  auto* baseline = app.add_subcommand("baseline", "Stateless shot/CoT prompting pipeline");
  add_common(baseline);
  auto* shots_opt = baseline->add_option("--shots", shots, "Number of examples in the prompt")
                        ->check(CLI::IsMember({0, 1, 3}));
  auto* cot_opt = baseline->add_flag("--cot", cot, "Add the chain-of-thought instruction");
  baseline->add_flag("--all", all_modes, "Run all six shot/CoT modes")
      ->excludes(shots_opt)
      ->excludes(cot_opt);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Aggregate run traces into tables");
  report->add_option("--dir,-d", report_dir, "Directory holding run outputs")->required();

  bool reference = false;
  auto* config = app.add_subcommand("config", "Print the effective configuration");
  config->add_option("--config,-c", config_path, "JSON config file")->check(CLI::ExistingFile);
  config->add_option("--set", overrides, "Override a config key");
  config->add_flag("--reference", reference, "Print the key reference table instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::optional<std::filesystem::path> cfg;
  if (!config_path.empty()) cfg = config_path;

  try {
    if (*run) {
      RunRequest req;
      req.sources.assign(sources.begin(), sources.end());
      req.config = cfg;
      req.overrides = overrides;
      req.jobs = jobs;
      return cmd_run(req, Services::defaults());
    }
    if (*baseline) {
      BaselineRequest req;
      req.sources.assign(sources.begin(), sources.end());
      req.config = cfg;
      req.overrides = overrides;
      req.shots = shots;
      req.cot = cot;
      req.all = all_modes;
      return cmd_baseline(req, Services::defaults());
    }
    if (*report) return cmd_report(report_dir, Services::defaults());
    if (*config) {
      if (reference) {
        std::cout << config_reference_table();
        return 0;
      }
      std::cout << to_json(load_config(cfg, overrides)).dump(2) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kConfig ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
