#pragma once

#include "hsnet/geometry.hpp"
#include "hsnet/kernel.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hsnet {

//! Certified metrics are upper bounds; estimated ones are grid maxima.
enum class MetricsProvenance { certified, estimated };

std::string_view to_string(MetricsProvenance p);

struct OmegaEntry {
  double delta;
  double omega;
};

struct OmegaValue {
  double value;
  //! The requested delta lies past the table; value falls back to 2M.
  bool extrapolated = false;
};

/*!
  Sup norm M and modulus of continuity of a kernel in its second argument.

  Certified metrics give omega(delta) = min(L delta, 2M) from an analytic
  Lipschitz constant L. Estimated metrics carry a table that is non-decreasing
  in delta; lookups take the entry at the next tabulated delta upward.
*/
struct KernelMetrics {
  double M = 0.0;
  MetricsProvenance provenance = MetricsProvenance::certified;
  MatrixNorm norm = MatrixNorm::spectral;
  std::optional<double> lipschitz;
  std::vector<OmegaEntry> omega_table;
  //! Grid nodes per axis behind the estimates; 0 for certified metrics.
  int resolution = 0;

  //! Throws RefineOmega past the table when `strict` is set.
  OmegaValue omega(double delta, bool strict = false) const;
};

//! Metrics from the kernel's analytic bounds; throws if it has none.
KernelMetrics certified_metrics(const Kernel& kernel);

//! Largest |K(xi, s)| over a tensor grid with `resolution` nodes per axis.
double kernel_sup_norm(const Kernel& kernel, const Domain& domain,
                       int resolution);

/*!
  Grid estimate of omega at each requested delta.

  Pairs (s1, s2) come from the tensor grid and from axis-aligned offsets of
  each grid point by exactly delta, so every delta sees at least one pair.
  The result is sorted by delta and made monotone by a cumulative max.
*/
std::vector<OmegaEntry> modulus_of_continuity(const Kernel& kernel,
                                              const Domain& domain,
                                              std::span<const double> deltas,
                                              int resolution);

//! Geometric ladder diameter, diameter/2, ..., `count` entries.
std::vector<double> default_omega_deltas(const Domain& domain, int count = 16);

KernelMetrics estimated_metrics(const Kernel& kernel, const Domain& domain,
                                std::span<const double> deltas, int resolution);

//! Default grid resolution per axis for a domain dimension.
int default_metrics_resolution(int dim);

}  // namespace hsnet
