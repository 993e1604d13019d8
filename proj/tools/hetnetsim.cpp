#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hetnetsim/cli.hpp"

int main(int argc, char** argv) {
  using namespace hetnetsim;

  CLI::App app{"hetnetsim: heterogeneous access network simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario document");
  validate->add_option("file", validate_path, "Scenario JSON")->required();

  cli::RunArgs run_args;
  std::string run_preset;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "Simulate one scenario and export kpi.json and events.csv");
  run->add_option("file", run_args.path, "Scenario JSON")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_option("--out", run_args.outdir, "Output directory")->capture_default_str();
  auto* run_preset_opt = run->add_option("--preset", run_preset, "Apply a named handover preset");

  cli::SweepArgs sweep_args;
  std::string sweep_preset;
  std::string sweep_mode = "closed";
  auto* sweep = app.add_subcommand("sweep", "Run one simulation per value of a numeric parameter");
  sweep->add_option("file", sweep_args.path, "Scenario JSON")->required();
  sweep->add_option("--axis", sweep_args.axis, "Dotted parameter path, e.g. handover.score_margin")->required();
  sweep->add_option("--values", sweep_args.values, "Comma-separated values")->required()->allow_extra_args(false);
  sweep->add_option("--out", sweep_args.outdir, "Output directory")->capture_default_str();
  auto* sweep_preset_opt = sweep->add_option("--preset", sweep_preset, "Apply a named handover preset");
  sweep->add_option("--mode", sweep_mode, "closed (independent runs) or replay (fixed recorded trace)")
      ->check(CLI::IsMember({"closed", "replay"}))
      ->capture_default_str();

  std::string report_path;
  bool report_json = false;
  auto* report = app.add_subcommand("report", "Recompute KPIs from an exported events.csv");
  report->add_option("events", report_path, "Event log CSV")->required();
  report->add_flag("--json", report_json, "Print the KPI report as JSON (same format as kpi.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitIo;
  }

  try {
    if (*validate) return cli::cmd_validate(validate_path, std::cout, std::cerr);
    if (*run) {
      if (*seed_opt) run_args.seed = run_seed;
      if (*run_preset_opt) run_args.preset = run_preset;
      return cli::cmd_run(run_args, std::cout, std::cerr);
    }
    if (*sweep) {
      if (*sweep_preset_opt) sweep_args.preset = sweep_preset;
      sweep_args.mode = sweep_mode == "replay" ? sim::SweepMode::Replay : sim::SweepMode::ClosedLoop;
      return cli::cmd_sweep(sweep_args, std::cout, std::cerr);
    }
    if (*report) return cli::cmd_report(report_path, report_json, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  }
  return cli::kExitIo;
}
