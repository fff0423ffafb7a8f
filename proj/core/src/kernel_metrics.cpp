#include "hsnet/kernel_metrics.hpp"

#include "hsnet/error.hpp"
#include "hsnet/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace hsnet {

std::string_view to_string(MetricsProvenance p) {
  return p == MetricsProvenance::certified ? "certified" : "estimated";
}

OmegaValue KernelMetrics::omega(double delta, bool strict) const {
  if (!(delta > 0.0)) throw InvalidArgument("omega: delta must be positive");
  if (lipschitz) return {std::min(*lipschitz * delta, 2.0 * M), false};
  const auto it = std::lower_bound(
      omega_table.begin(), omega_table.end(), delta,
      [](const OmegaEntry& e, double d) { return e.delta < d; });
  if (it != omega_table.end()) return {it->omega, false};
  if (strict) {
    throw RefineOmega("omega table stops at delta " +
                      std::to_string(omega_table.empty() ? 0.0 : omega_table.back().delta) +
                      "; requested " + std::to_string(delta));
  }
  return {2.0 * M, true};
}

KernelMetrics certified_metrics(const Kernel& kernel) {
  if (!kernel.analytic()) {
    throw InvalidArgument("kernel '" + kernel.description() +
                          "' has no analytic metrics");
  }
  KernelMetrics m;
  m.M = kernel.analytic()->sup;
  m.lipschitz = kernel.analytic()->lipschitz;
  m.provenance = MetricsProvenance::certified;
  m.norm = kernel.norm();
  return m;
}

int default_metrics_resolution(int dim) {
  switch (dim) {
    case 1: return 65;
    case 2: return 17;
    default: return 7;
  }
}

namespace {

std::vector<Point> tensor_grid(const Domain& domain, int resolution) {
  if (resolution < 2) throw InvalidArgument("metrics resolution must be >= 2");
  const int k = domain.dim();
  std::size_t total = 1;
  for (int a = 0; a < k; ++a) total *= static_cast<std::size_t>(resolution);
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t g = 0; g < total; ++g) {
    Point p(k);
    std::size_t rest = g;
    for (int a = k - 1; a >= 0; --a) {
      const auto i = static_cast<double>(rest % static_cast<std::size_t>(resolution));
      rest /= static_cast<std::size_t>(resolution);
      p[a] = domain.lower()[a] +
             (domain.upper()[a] - domain.lower()[a]) * i / (resolution - 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

double kernel_sup_norm(const Kernel& kernel, const Domain& domain,
                       int resolution) {
  const auto grid = tensor_grid(domain, resolution);
  std::vector<double> best(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    Eigen::MatrixXd value(kernel.rows(), kernel.cols());
    for (const auto& s : grid) {
      kernel.evaluate(grid[i], s, value);
      best[i] = std::max(best[i], matrix_norm(value, kernel.norm()));
    }
  });
  return *std::max_element(best.begin(), best.end());
}

std::vector<OmegaEntry> modulus_of_continuity(const Kernel& kernel,
                                              const Domain& domain,
                                              std::span<const double> deltas,
                                              int resolution) {
  std::vector<double> sorted(deltas.begin(), deltas.end());
  for (double d : sorted) {
    if (!(d > 0.0)) throw InvalidArgument("omega deltas must be positive");
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) return {};

  const auto grid = tensor_grid(domain, resolution);
  const int k = domain.dim();
  const MatrixNorm norm = kernel.norm();
  const std::size_t nd = sorted.size();
  constexpr double rel_tol = 1e-12;

  // One row of per-delta maxima per xi; reduced by max, so order is irrelevant.
  std::vector<std::vector<double>> rows(grid.size(), std::vector<double>(nd, 0.0));
  parallel_for(grid.size(), [&](std::size_t x) {
    auto& best = rows[x];
    const Point& xi = grid[x];
    std::vector<Eigen::MatrixXd> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = kernel(xi, grid[i]);

    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        const double dist = (grid[i] - grid[j]).norm();
        const auto it = std::lower_bound(sorted.begin(), sorted.end(),
                                         dist * (1.0 - rel_tol));
        if (it == sorted.end()) continue;
        const auto slot = static_cast<std::size_t>(it - sorted.begin());
        best[slot] = std::max(best[slot], matrix_norm(values[i] - values[j], norm));
      }
    }

    Eigen::MatrixXd moved(kernel.rows(), kernel.cols());
    for (std::size_t slot = 0; slot < nd; ++slot) {
      const double d = sorted[slot];
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int a = 0; a < k; ++a) {
          Point s2 = grid[i];
          s2[a] += d;
          if (s2[a] > domain.upper()[a]) s2[a] = grid[i][a] - d;
          if (s2[a] < domain.lower()[a]) continue;
          kernel.evaluate(xi, s2, moved);
          best[slot] = std::max(best[slot], matrix_norm(moved - values[i], norm));
        }
      }
    }
  });

  std::vector<OmegaEntry> table(nd);
  double running = 0.0;
  for (std::size_t slot = 0; slot < nd; ++slot) {
    for (const auto& row : rows) running = std::max(running, row[slot]);
    table[slot] = {sorted[slot], running};
  }
  return table;
}

std::vector<double> default_omega_deltas(const Domain& domain, int count) {
  std::vector<double> out;
  double d = domain.diameter();
  for (int i = 0; i < count; ++i, d /= 2.0) out.push_back(d);
  std::reverse(out.begin(), out.end());
  return out;
}

KernelMetrics estimated_metrics(const Kernel& kernel, const Domain& domain,
                                std::span<const double> deltas, int resolution) {
  KernelMetrics m;
  m.provenance = MetricsProvenance::estimated;
  m.norm = kernel.norm();
  m.resolution = resolution;
  m.M = kernel_sup_norm(kernel, domain, resolution);
  m.omega_table = modulus_of_continuity(kernel, domain, deltas, resolution);
  return m;
}

}  // namespace hsnet
