#pragma once

#include <hsnet/kernel.hpp>
#include <hsnet/verify.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsnet::cli {

//! Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainSpec {
  std::vector<double> lower{0.0};
  std::vector<double> upper{1.0};

  bool operator==(const DomainSpec&) const = default;
};

struct KernelSpec {
  int rows = 1;
  int cols = 1;
  MatrixNorm norm = MatrixNorm::spectral;
  //! Builtin scalar terms, e.g. "gaussian(beta=2)"; empty with no table means
  //! the zero kernel.
  std::vector<std::string> terms;
  //! Row-major rows x cols coefficient per term.
  std::vector<std::vector<double>> coefficients;
  //! Tabulated kernel file, relative to the config file's directory.
  std::string table;
  //! "analytic" or "estimated".
  std::string metrics = "analytic";
  //! Grid nodes per axis for estimated metrics; 0 picks a default.
  int metrics_resolution = 0;

  bool operator==(const KernelSpec&) const = default;
};

struct ParameterSpec {
  double p = 2.0;
  double r = 1.0;
  // Explicit mode.
  std::optional<double> gamma;
  std::optional<double> partition_delta;
  std::optional<std::uint32_t> magnitude_intervals;
  std::optional<double> sigma;
  double lambda = 0.0;
  // Target mode.
  std::optional<double> epsilon;
  bool optimize_split = false;

  bool target_mode() const noexcept { return epsilon.has_value(); }
  bool operator==(const ParameterSpec&) const = default;
};

struct RunSpec {
  int quadrature_order = 3;
  //! Output partition width; 0 picks min(Delta, diameter / 4).
  double output_delta = 0.0;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t samples = 1000;
  FamilyMode family_mode = FamilyMode::enumerate;
  std::size_t family_samples = 10000;
  std::uint64_t seed = 1;
  Smoothness smoothness = Smoothness::rough;
  double boundary_fraction = 0.5;
  double amplitude = 1.0;
  bool strict_metrics = false;
  double bound_scale = 1.0;
  std::string report;
  std::string family_file;
  std::string image_file;
  std::string sweep_file;

  bool operator==(const RunSpec&) const = default;
};

struct RunConfig {
  DomainSpec domain;
  KernelSpec kernel;
  ParameterSpec parameters;
  RunSpec run;
  //! Directory relative paths resolve against; not serialized.
  std::filesystem::path base_dir;

  bool operator==(const RunConfig& o) const {
    return domain == o.domain && kernel == o.kernel &&
           parameters == o.parameters && run == o.run;
  }

  std::filesystem::path resolve(const std::string& path) const;
};

/*!
  Parses the INI text. Sections: [domain], [kernel], [parameters], [run].
  Unknown sections or keys are errors. Exactly one of `epsilon` or the
  explicit set (gamma, partition_delta, magnitude_intervals or
  magnitude_delta, sigma) must be present.
*/
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

//! Canonical INI text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace hsnet::cli
