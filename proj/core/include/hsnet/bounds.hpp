#pragma once

#include "hsnet/kernel_metrics.hpp"

#include <cstdint>

namespace hsnet {

struct BoundParameters {
  double p = 2.0;
  double r = 1.0;
  //! mu(Omega).
  double measure = 1.0;
  double lambda = 0.0;
  double gamma = 1.0;
  //! Partition diameter Delta.
  double partition_delta = 1.0;
  //! Magnitude grid step delta.
  double magnitude_delta = 0.1;
  double sigma = 1.0;
};

/*!
  The error bound and its terms:

    c*    = 2 r^p mu^(1/q)
    tail  = c* M / gamma^(p-1)
    psi   = 2 r mu^(2/q) omega(Delta)
    phi   = M mu^(1+1/q) delta
    alpha = M mu^(1+1/q) gamma sigma
    total = lambda + tail + psi + phi + alpha, summed in that order.
*/
struct BoundBreakdown {
  double lambda = 0.0;
  double c_star = 0.0;
  double tail = 0.0;
  double psi = 0.0;
  double phi = 0.0;
  double alpha = 0.0;
  double total = 0.0;

  double M = 0.0;
  double omega = 0.0;
  bool omega_extrapolated = false;
  MetricsProvenance provenance = MetricsProvenance::certified;
};

//! Throws InvalidArgument on out-of-range parameters and RefineOmega when
//! `strict` and omega(Delta) is past the table.
BoundBreakdown error_bound(const BoundParameters& params,
                           const KernelMetrics& metrics, bool strict = false);

/*!
  Parameters that meet a target epsilon with the five-way epsilon/5 split.

  The starred values are the closed forms. The realized grid uses
  a = ceil(gamma_star / delta_star) intervals, so its step never exceeds
  delta_star, and sigma is capped at the sphere diameter 2. `achieved` is
  the bound at the realized values.
*/
struct ParameterSelection {
  double epsilon = 0.0;
  double lambda = 0.0;
  double gamma_star = 0.0;
  double delta_star = 0.0;
  double sigma_star = 0.0;
  double partition_delta_star = 0.0;

  std::uint32_t magnitude_intervals = 1;
  double magnitude_delta = 0.0;
  double sigma = 0.0;

  //! M = 0: every term but lambda vanishes; the other fields are nominal.
  bool zero_kernel = false;
  BoundBreakdown achieved;
};

/*!
  `diameter` caps Delta*. Estimated metrics pick the largest tabulated delta
  whose omega meets the psi share; RefineOmega is thrown when none does.
*/
ParameterSelection select_parameters(double epsilon, double p, double r,
                                     double measure, double diameter,
                                     const KernelMetrics& metrics);

/*!
  Alternative split: lambda, psi and phi keep epsilon/5 each and the
  remaining 2 epsilon/5 is shared between tail and alpha by choosing gamma to
  maximize sigma. Coarser direction nets shrink the family quickly in n >= 2.
*/
struct SplitOptimization {
  ParameterSelection even_split;
  ParameterSelection optimized;
};

SplitOptimization optimize_split(double epsilon, double p, double r,
                                 double measure, double diameter,
                                 const KernelMetrics& metrics);

}  // namespace hsnet
