#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crossover/cli.hpp"

namespace {

int with_scenario(const std::string& path, auto&& body) {
  try {
    return body(crossover::load_config(path));
  } catch (const crossover::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const crossover::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
  }
  return crossover::cli::kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace crossover;
  CLI::App app{"Crossover co-location scheduler simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  std::vector<std::string> formats;
  double ratio_min = 0.1;
  double ratio_max = 2.0;
  int steps = 20;
  cli::EquivalenceOptions eq;
  std::optional<int> jobs;
  std::optional<int> perturb;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write metrics and trace");
  simulate->add_option("--config", config, "Scenario JSON")->required();
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--format", formats, "json | csv | table | chrome-trace (repeatable)")
      ->check(CLI::IsMember({"json", "csv", "table", "chrome-trace"}));

  auto* sweep = app.add_subcommand("sweep", "Sweep the comm/comp ratio and report speedups");
  sweep->add_option("--config", config, "Base scenario JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--ratio-min", ratio_min, "Smallest comm/comp ratio");
  sweep->add_option("--ratio-max", ratio_max, "Largest comm/comp ratio");
  sweep->add_option("--steps", steps, "Number of sweep points (>= 2)");

  auto* equivalence = app.add_subcommand("equivalence", "Check schedule-neutral SGD trajectories");
  equivalence->add_option("--seed", eq.seed, "Base seed");
  equivalence->add_option("--iters", eq.iters, "Iterations per trajectory");
  equivalence->add_option("--jobs", jobs, "Only this many co-located jobs");
  equivalence->add_option("--perturb-iteration", perturb,
                          "Test hook: perturb one update of job 1 by one ulp");

  auto* validate = app.add_subcommand("validate-config", "Parse and validate a scenario");
  validate->add_option("--config", config, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidation;
  }

  if (*simulate) {
    return with_scenario(config, [&](const Scenario& s) {
      return cli::cmd_simulate(s, out_dir, formats, std::cout);
    });
  }
  if (*sweep) {
    return with_scenario(config, [&](const Scenario& s) {
      return cli::cmd_sweep(s, ratio_min, ratio_max, steps, out_dir, std::cout);
    });
  }
  if (*equivalence) {
    if (jobs) eq.jobs = {*jobs};
    eq.perturb_iteration = perturb;
    return cli::cmd_equivalence(eq, std::cout);
  }
  return cli::cmd_validate_config(config, std::cout);
}
