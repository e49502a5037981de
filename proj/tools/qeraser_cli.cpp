// qeraser_cli.cpp
// Scenario runner: `qeraser run <file> [--out dir] [--ascii] [--seed n]`
// loads a scenario, executes the experiment and prints the key=value
// summary; `qeraser --list` prints the experiment schemas.
//
// Exit codes: 0 success, 2 scenario validation failure, 3 internal
// invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qeraser/qeraser.hpp"

namespace {

void print_schemas(std::ostream& os) {
  for (const qeraser::ExperimentSchema& s : qeraser::experiment_schemas()) {
    os << s.name << "\n  " << s.doc << "\n";
    for (const auto& [key, spec] : s.keys) {
      os << "  " << key << " : " << qeraser::setting_type_name(spec.type)
         << (spec.required ? " (required)" : "") << " -- " << spec.doc << "\n";
    }
    os << "  seed : integer -- sampling seed (default 0)\n";
    os << "  shots : integer -- sample count where sampling applies (default 1)\n";
    os << "  [screen] x_min x_max points slit_half_separation envelope_sigma"
          " fringe_wavenumber\n\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-vector laboratory for eraser and delayed-choice experiments"};
  app.require_subcommand(0, 1);

  bool list_schemas = false;
  app.add_flag("--list", list_schemas, "print the experiment schemas and exit");

  std::string scenario_path;
  std::string out_dir;
  bool ascii = false;
  std::optional<std::uint64_t> seed_override;
  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("file", scenario_path, "scenario file")->required();
  run_cmd->add_option("--out", out_dir, "directory for per-pattern CSV files");
  run_cmd->add_flag("--ascii", ascii, "render patterns as 60-column ascii plots");
  run_cmd->add_option("--seed", seed_override, "override the scenario seed");

  CLI11_PARSE(app, argc, argv);

  if (list_schemas) {
    print_schemas(std::cout);
    return 0;
  }
  if (!run_cmd->parsed()) {
    std::cerr << app.help() << "\n";
    return 2;
  }

  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read scenario file '" << scenario_path << "'\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  qeraser::Scenario scenario;
  try {
    scenario = qeraser::parse_scenario(buffer.str());
  } catch (const qeraser::scenario_error& e) {
    std::cerr << scenario_path << ":" << e.what() << "\n";
    return 2;
  }
  if (seed_override) scenario.seed = *seed_override;

  try {
    const qeraser::ExperimentReport report = qeraser::run(scenario);
    qeraser::EmitTargets targets;
    targets.summary = &std::cout;
    targets.ascii = ascii;
    targets.prefix = scenario.prefix;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      targets.out_dir = out_dir;
    }
    qeraser::emit(report, targets);
    return 0;
  } catch (const qeraser::scenario_error& e) {
    std::cerr << scenario_path << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  }
}
