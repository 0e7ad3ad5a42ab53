// mono-split: benchmark driver for monotone stochastic generalized
// equations.
//
//   mono-split run <config>            run an experiment config
//   mono-split reproduce <preset>      regenerate a preset table
//   mono-split validate <instance>     probe an instance file's certificates
//
// Exit codes: 0 success, 2 configuration or usage error, 3 every trial of
// some solver diverged, 4 a validation property failed.

#include "monosplit/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <string>

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int jobs, int trials,
            long seed) {
  monosplit::ExperimentConfig cfg = monosplit::load_experiment_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (jobs > 0) cfg.jobs = jobs;
  if (trials > 0) cfg.trials = trials;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  monosplit::ExperimentOutcome outcome = monosplit::run_experiment(cfg);
  monosplit::write_experiment_outputs(cfg, outcome);
  monosplit::print_rows(std::cout, outcome.rows);
  std::cout << "wrote " << cfg.out_dir << "/aggregate.csv\n";
  return outcome.exit_code;
}

int cmd_reproduce(const std::string& preset, const monosplit::ReproduceOptions& opt) {
  if (preset == "table2") return monosplit::reproduce_table2(opt, std::cout);
  if (preset == "table3") return monosplit::reproduce_table3(opt, std::cout);
  if (preset == "table4") return monosplit::reproduce_table4(opt, std::cout);
  if (preset == "all") return monosplit::reproduce_all(opt, std::cout);
  std::cerr << "error: unknown preset '" << preset
            << "' (expected table2, table3, table4, or all)\n";
  return 2;
}

int cmd_validate(const std::string& instance_path, const monosplit::ValidateOptions& opt) {
  std::ifstream in(instance_path);
  if (!in) {
    std::cerr << "error: cannot open instance file '" << instance_path << "'\n";
    return 2;
  }
  monosplit::json doc;
  try {
    in >> doc;
  } catch (const monosplit::json::exception& e) {
    std::cerr << "error: invalid instance JSON: " << e.what() << "\n";
    return 2;
  }
  monosplit::ProblemSpec p;
  try {
    p = monosplit::problem_from_instance_json(doc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const monosplit::ValidationReport report = monosplit::validate_problem(p, opt);
  for (const auto& check : report.checks)
    std::cout << (check.passed ? "[ok]   " : "[FAIL] ") << check.name << ": " << check.detail
              << "\n";
  if (report.all_passed()) {
    std::cout << "validate: all " << report.checks.size() << " checks passed\n";
    return 0;
  }
  std::cout << "validate: property failure\n";
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark driver for monotone stochastic generalized equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mono-split 1.0.0");

  std::string config_path, out_dir;
  int jobs = 0, trials = 0;
  long seed = -1;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file (native key-value or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "override the config's output directory");
  run->add_option("--jobs", jobs, "worker threads (overrides config and MONO_SPLIT_JOBS)");
  run->add_option("--trials", trials, "override the config's trial count");
  run->add_option("--seed", seed, "override the config's master seed");

  std::string preset;
  monosplit::ReproduceOptions ropt;
  CLI::App* rep = app.add_subcommand("reproduce", "regenerate a preset table");
  rep->add_option("preset", preset, "table2 | table3 | table4 | all")->required();
  rep->add_option("--scale", ropt.scale, "budget/scenario multiplier (default 1.0)")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  rep->add_option("--seed", ropt.seed, "master seed (default 777)");
  rep->add_option("--jobs", ropt.jobs, "worker threads");
  rep->add_option("--out,--out-dir", ropt.out_dir, "output directory (default out)");
  rep->add_option("--trials", ropt.trials, "trials per row (default 20)")
      ->check(CLI::PositiveNumber);

  std::string instance_path;
  monosplit::ValidateOptions vopt;
  CLI::App* val = app.add_subcommand("validate", "probe an instance file's certificates");
  val->add_option("instance", instance_path, "instance JSON file")->required();
  val->add_option("--pairs", vopt.pairs, "probe pairs per check (default 200)");
  val->add_option("--draws", vopt.draws, "oracle draws per moment check (default 2000)");
  val->add_option("--seed", vopt.seed, "validation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, jobs, trials, seed);
    if (rep->parsed()) return cmd_reproduce(preset, ropt);
    if (val->parsed()) return cmd_validate(instance_path, vopt);
  } catch (const monosplit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
