#include "hsnet/bounds.hpp"

#include "hsnet/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hsnet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

double conjugate(double p) { return p / (p - 1.0); }

}  // namespace

BoundBreakdown error_bound(const BoundParameters& b,
                           const KernelMetrics& metrics, bool strict) {
  require(b.p > 1.0 && std::isfinite(b.p), "p must be a finite real greater than 1");
  require(b.r > 0.0, "r must be positive");
  require(b.measure > 0.0, "domain measure must be positive");
  require(b.lambda >= 0.0, "lambda must be non-negative");
  require(b.gamma > 0.0, "gamma must be positive");
  require(b.partition_delta > 0.0, "partition delta must be positive");
  require(b.magnitude_delta > 0.0 && b.magnitude_delta <= b.gamma * (1.0 + 1e-12),
          "magnitude delta must lie in (0, gamma]");
  require(b.sigma > 0.0 && b.sigma <= 2.0, "sigma must lie in (0, 2]");
  require(metrics.M >= 0.0, "kernel sup norm must be non-negative");

  const double q = conjugate(b.p);
  const double mu_q = std::pow(b.measure, 1.0 / q);
  const double mu_lift = b.measure * mu_q;
  const OmegaValue omega = metrics.omega(b.partition_delta, strict);

  BoundBreakdown out;
  out.M = metrics.M;
  out.omega = omega.value;
  out.omega_extrapolated = omega.extrapolated;
  out.provenance = metrics.provenance;
  out.lambda = b.lambda;
  out.c_star = 2.0 * std::pow(b.r, b.p) * mu_q;
  out.tail = out.c_star * metrics.M / std::pow(b.gamma, b.p - 1.0);
  out.psi = 2.0 * b.r * std::pow(b.measure, 2.0 / q) * omega.value;
  out.phi = metrics.M * mu_lift * b.magnitude_delta;
  out.alpha = metrics.M * mu_lift * b.gamma * b.sigma;
  out.total = (((out.lambda + out.tail) + out.psi) + out.phi) + out.alpha;
  return out;
}

namespace {

// Largest Delta <= diameter with psi(Delta) <= share.
double choose_partition_delta(double share, double r, double measure, double q,
                              double diameter, const KernelMetrics& metrics) {
  const double scale = 2.0 * r * std::pow(measure, 2.0 / q);
  auto psi = [&](double delta) { return scale * metrics.omega(delta).value; };

  if (metrics.lipschitz) {
    if (psi(diameter) <= share) return diameter;
    double delta = share / (scale * *metrics.lipschitz);
    while (delta > 0.0 && psi(delta) > share) delta = std::nextafter(delta, 0.0);
    return std::min(delta, diameter);
  }

  double best = 0.0;
  for (const auto& e : metrics.omega_table) {
    if (e.delta <= diameter && scale * e.omega <= share) best = std::max(best, e.delta);
  }
  if (best == 0.0) {
    const double finest =
        metrics.omega_table.empty() ? 0.0 : metrics.omega_table.front().omega;
    throw RefineOmega("no tabulated delta has omega <= " +
                      std::to_string(share / scale) +
                      "; the finest entry has omega " + std::to_string(finest));
  }
  return best;
}

ParameterSelection realize(double epsilon, double p, double r, double measure,
                           double gamma, double delta_star, double sigma_star,
                           double partition_delta, const KernelMetrics& metrics) {
  ParameterSelection s;
  s.epsilon = epsilon;
  s.lambda = epsilon / 5.0;
  s.gamma_star = gamma;
  s.delta_star = delta_star;
  s.sigma_star = sigma_star;
  s.partition_delta_star = partition_delta;

  const double ratio = std::ceil(gamma / delta_star);
  if (!(ratio <= static_cast<double>(std::numeric_limits<std::uint32_t>::max()))) {
    throw InvalidArgument("magnitude grid would need " + std::to_string(ratio) +
                          " intervals");
  }
  s.magnitude_intervals = static_cast<std::uint32_t>(std::max(ratio, 1.0));
  s.magnitude_delta = gamma / s.magnitude_intervals;
  while (s.magnitude_delta > delta_star) {
    ++s.magnitude_intervals;
    s.magnitude_delta = gamma / s.magnitude_intervals;
  }
  s.sigma = std::min(sigma_star, 2.0);
  s.achieved = error_bound({p, r, measure, s.lambda, gamma, partition_delta,
                            s.magnitude_delta, s.sigma},
                           metrics);
  return s;
}

ParameterSelection zero_kernel_selection(double epsilon, double p, double r,
                                         double measure, double diameter,
                                         const KernelMetrics& metrics) {
  // Any parameters give the bound lambda; pick the coarsest family.
  ParameterSelection s = realize(epsilon, p, r, measure, r, r, 2.0, diameter, metrics);
  s.zero_kernel = true;
  return s;
}

void check_selection_args(double epsilon, double p, double r, double measure,
                          double diameter) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(p > 1.0 && std::isfinite(p), "p must be a finite real greater than 1");
  require(r > 0.0, "r must be positive");
  require(measure > 0.0, "domain measure must be positive");
  require(diameter > 0.0, "domain diameter must be positive");
}

}  // namespace

ParameterSelection select_parameters(double epsilon, double p, double r,
                                     double measure, double diameter,
                                     const KernelMetrics& metrics) {
  check_selection_args(epsilon, p, r, measure, diameter);
  if (metrics.M == 0.0) {
    return zero_kernel_selection(epsilon, p, r, measure, diameter, metrics);
  }
  const double q = conjugate(p);
  const double share = epsilon / 5.0;
  const double c_star = 2.0 * std::pow(r, p) * std::pow(measure, 1.0 / q);
  const double gamma = std::pow(5.0 * c_star * metrics.M / epsilon, 1.0 / (p - 1.0));
  const double delta = epsilon / (5.0 * metrics.M * std::pow(measure, 1.0 + 1.0 / q));
  const double sigma = delta / gamma;
  const double partition_delta =
      choose_partition_delta(share, r, measure, q, diameter, metrics);
  return realize(epsilon, p, r, measure, gamma, delta, sigma, partition_delta, metrics);
}

SplitOptimization optimize_split(double epsilon, double p, double r,
                                 double measure, double diameter,
                                 const KernelMetrics& metrics) {
  SplitOptimization out;
  out.even_split = select_parameters(epsilon, p, r, measure, diameter, metrics);
  if (out.even_split.zero_kernel) {
    out.optimized = out.even_split;
    return out;
  }
  // sigma(gamma) = (B - C gamma^(1-p)) / (K gamma) with B = 2 eps / 5 peaks
  // where gamma^(p-1) = p C / B.
  const double q = conjugate(p);
  const double c_star = 2.0 * std::pow(r, p) * std::pow(measure, 1.0 / q);
  const double lift = metrics.M * std::pow(measure, 1.0 + 1.0 / q);
  const double B = 2.0 * epsilon / 5.0;
  const double C = c_star * metrics.M;
  const double gamma = std::pow(p * C / B, 1.0 / (p - 1.0));
  const double tail = C / std::pow(gamma, p - 1.0);
  double sigma = (B - tail) / (lift * gamma);
  // Rounding may leave tail + alpha a few ulps over B.
  while (tail + lift * gamma * sigma > B) sigma = std::nextafter(sigma, 0.0);
  out.optimized = realize(epsilon, p, r, measure, gamma, out.even_split.delta_star,
                          sigma, out.even_split.partition_delta_star, metrics);
  return out;
}

}  // namespace hsnet
