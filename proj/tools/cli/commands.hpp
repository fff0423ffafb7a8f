#pragma once

#include "config.hpp"

#include <hsnet/bounds.hpp>
#include <hsnet/geometry.hpp>
#include <hsnet/kernel.hpp>
#include <hsnet/kernel_metrics.hpp>
#include <hsnet/operator.hpp>
#include <hsnet/sphere_net.hpp>

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hsnet::cli {

enum ExitCode : int {
  kPass = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kResourceError = 3,
};

//! Everything a command needs, built once from a config. Not movable: the
//! operator keeps pointers into the partitions.
struct Setup {
  RunConfig config;
  std::optional<Domain> domain;
  std::optional<Kernel> kernel;
  KernelMetrics metrics;
  std::optional<ParameterSelection> selection;
  std::optional<SplitOptimization> split;

  double p = 2.0;
  double r = 1.0;
  double lambda = 0.0;
  double gamma = 1.0;
  double partition_delta = 1.0;
  std::uint32_t magnitude_intervals = 1;
  double sigma = 1.0;

  std::optional<MagnitudeGrid> grid;
  std::optional<Partition> input;
  std::optional<Partition> output;
  std::optional<DirectionNet> net;
  std::optional<DiscreteOperator> op;

  Setup() = default;
  Setup(const Setup&) = delete;
  Setup& operator=(const Setup&) = delete;
};

Kernel build_kernel(const RunConfig& config, const Domain& domain);

//! Kernel, metrics and parameters only; partitions and nets stay empty.
std::unique_ptr<Setup> resolve_parameters(const RunConfig& config);
//! Full setup including partitions, grid, net and operator.
std::unique_ptr<Setup> build_setup(const RunConfig& config);

struct CommandOptions {
  //! Overrides run.report when set.
  std::string report;
};

int cmd_bound(const RunConfig& config, const CommandOptions& options,
              std::ostream& out);
int cmd_build(const RunConfig& config, const CommandOptions& options,
              std::ostream& out);
int cmd_verify(const RunConfig& config, const CommandOptions& options,
               std::ostream& out);

struct SweepOptions {
  std::string axis;
  std::vector<double> values;
  //! CSV destination; falls back to run.sweep_file, then to `out`.
  std::string output;
};

//! Returns a copy of `config` with one parameter replaced.
RunConfig with_axis_value(const RunConfig& config, const std::string& axis,
                          double value);

int cmd_sweep(const RunConfig& config, const SweepOptions& options,
              std::ostream& out);

//! Writes the configured kernel as a table with `nodes` points per axis.
int cmd_tabulate(const RunConfig& config, int nodes, const std::string& path,
                 bool binary, std::ostream& out);

}  // namespace hsnet::cli
