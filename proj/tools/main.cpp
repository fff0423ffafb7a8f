#include "cli/commands.hpp"

#include <hsnet/error.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

using namespace hsnet;
using namespace hsnet::cli;

namespace {

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const RefineOmega& e) {
    fmt::print(stderr, "refine-omega: {}\nraise [kernel] metrics_resolution or use analytic metrics\n",
               e.what());
    return kConfigError;
  } catch (const FamilyTooLarge& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kResourceError;
  } catch (const BudgetIntractable& e) {
    fmt::print(stderr, "resource limit: {}\n", e.what());
    return kResourceError;
  } catch (const CoverageUnverifiable& e) {
    fmt::print(stderr, "coverage-unverifiable: {}\n", e.what());
    return kResourceError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kResourceError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified finite nets on images of L_p balls under integral operators"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions options;

  auto* bound = app.add_subcommand("bound", "Evaluate the error bound (or select parameters for epsilon)");
  bound->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  bound->add_option("--report", options.report, "JSON report path (overrides [run] report)");

  auto* build = app.add_subcommand("build", "Count, enumerate or sample the finite family and its images");
  build->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  build->add_option("--report", options.report, "JSON manifest path");

  auto* verify = app.add_subcommand("verify", "Check the bound and each proof step on sampled inputs");
  verify->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  verify->add_option("--report", options.report, "JSON report path");
  std::optional<std::uint64_t> seed;
  std::optional<double> bound_scale;
  verify->add_option("--seed", seed, "Override [run] seed");
  verify->add_option("--bound-scale", bound_scale, "Scale certified bounds (debugging)");

  SweepOptions sweep_options;
  auto* sweep = app.add_subcommand("sweep", "Repeat verify along one parameter axis and emit CSV");
  sweep->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", sweep_options.axis,
                    "gamma, partition_delta, magnitude_delta, magnitude_intervals, sigma, lambda, r or epsilon")
      ->required();
  sweep->add_option("--values", sweep_options.values, "Axis values")->required()->delimiter(',');
  sweep->add_option("--output", sweep_options.output, "CSV path (default: [run] sweep_file or stdout)");

  int nodes = 9;
  std::string table_path;
  bool binary = false;
  auto* tab = app.add_subcommand("tabulate", "Write the configured kernel as a table file");
  tab->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  tab->add_option("--nodes", nodes, "Grid nodes per axis")->check(CLI::Range(2, 1000));
  tab->add_option("--output", table_path, "Table path")->required();
  tab->add_flag("--binary", binary, "Store values as little-endian float64");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the config-error code.
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  return guarded([&] {
    RunConfig config = load_config(config_path);
    if (seed) config.run.seed = *seed;
    if (bound_scale) config.run.bound_scale = *bound_scale;
    if (*bound) return cmd_bound(config, options, std::cout);
    if (*build) return cmd_build(config, options, std::cout);
    if (*verify) return cmd_verify(config, options, std::cout);
    if (*sweep) return cmd_sweep(config, sweep_options, std::cout);
    return cmd_tabulate(config, nodes, table_path, binary, std::cout);
  });
}
