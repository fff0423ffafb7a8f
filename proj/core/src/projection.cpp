#include "hsnet/projection.hpp"

#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/input_family.hpp"
#include "hsnet/norms.hpp"
#include "hsnet/sphere_net.hpp"

#include <cmath>
#include <limits>

namespace hsnet {

SampledFn clip_to_gamma(const SampledFn& x, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  SampledFn out = x;
  for (Eigen::Index w = 0; w < out.values.cols(); ++w) {
    const double norm = out.values.col(w).norm();
    if (!(norm > gamma)) continue;
    auto col = out.values.col(w);
    col *= gamma / norm;
    // Rounding can leave the norm an ulp above gamma; clip must be idempotent.
    while (col.norm() > gamma) col *= 1.0 - std::numeric_limits<double>::epsilon();
  }
  return out;
}

double measure_above(const SampledFn& x, const Partition& partition,
                     double gamma) {
  const auto nodes = partition.nodes();
  if (x.node_count() != nodes.size()) {
    throw InvalidArgument("sampled function does not match the quadrature");
  }
  double m = 0.0;
  for (std::size_t w = 0; w < nodes.size(); ++w) {
    if (x.values.col(static_cast<Eigen::Index>(w)).norm() > gamma) {
      m += nodes[w].weight;
    }
  }
  return m;
}

PiecewiseConstFn cell_average(const SampledFn& x, const Partition& partition) {
  if (x.node_count() != partition.node_count()) {
    throw InvalidArgument("sampled function does not match the quadrature");
  }
  PiecewiseConstFn out;
  out.cell_values.reserve(partition.size());
  for (const auto& cell : partition.cells()) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.dim());
    double weight = 0.0;
    for (std::size_t w = cell.node_begin; w < cell.node_end; ++w) {
      const double wt = partition.nodes()[w].weight;
      sum += wt * x.values.col(static_cast<Eigen::Index>(w));
      weight += wt;
    }
    // Dividing by the quadrature weight keeps constants fixed exactly and
    // preserves the discrete cell integral.
    out.cell_values.push_back(sum / weight);
  }
  return out;
}

namespace {

constexpr double kGammaTolerance = 1e-12;

Eigen::VectorXd rescale(const Eigen::VectorXd& v, double norm, double target) {
  if (target == 0.0) return Eigen::VectorXd::Zero(v.size());
  if (norm == target) return v;
  return v * (target / norm);
}

}  // namespace

RoundedFn round_magnitude(const PiecewiseConstFn& x, const MagnitudeGrid& grid) {
  RoundedFn out;
  out.values.cell_values.reserve(x.cell_count());
  out.magnitude.reserve(x.cell_count());
  const double gamma = grid.gamma();
  for (const auto& v : x.cell_values) {
    const double norm = v.norm();
    if (norm > gamma * (1.0 + kGammaTolerance)) {
      throw InvalidArgument("round_magnitude: cell magnitude " +
                            std::to_string(norm) + " exceeds gamma " +
                            std::to_string(gamma));
    }
    const std::uint32_t j = grid.floor_index(norm);
    out.magnitude.push_back(j);
    out.values.cell_values.push_back(rescale(v, norm, grid.value(j)));
  }
  return out;
}

SnappedFn snap_direction(const RoundedFn& x, const MagnitudeGrid& grid,
                         const DirectionNet& net) {
  SnappedFn out;
  out.member = NetMember::zero(x.magnitude.size());
  for (std::size_t i = 0; i < x.magnitude.size(); ++i) {
    const std::uint32_t j = x.magnitude[i];
    out.member.magnitude[i] = j;
    if (j == 0) continue;
    const auto& v = x.values.cell_values[i];
    if (v.size() != net.dim()) {
      throw InvalidArgument("function dimension differs from the net dimension");
    }
    const double norm = v.norm();
    if (norm == 0.0) {
      throw InvalidArgument("nonzero magnitude index on a zero cell value");
    }
    out.member.direction[i] = static_cast<std::uint32_t>(net.nearest(v / norm));
  }
  out.values = realize(out.member, grid, net);
  return out;
}

namespace {

StageDisplacement displacement(const SampledFn& before, const SampledFn& after,
                               const Partition& partition, double p) {
  return {sup_distance(before, after), lp_distance(before, after, partition, p)};
}

StageDisplacement displacement(const PiecewiseConstFn& before,
                               const PiecewiseConstFn& after,
                               const Partition& partition, double p) {
  return {sup_distance(before, after), lp_distance(before, after, partition, p)};
}

// Rounding noise can leave a floored profile a hair over budget when the input
// sits on the ball's boundary. Lower the cell whose extra displacement is
// smallest, one grid step at a time.
std::size_t repair_budget(RoundedFn& rounded, const PiecewiseConstFn& averaged,
                          const MagnitudeGrid& grid, const Budget& budget) {
  std::size_t repairs = 0;
  while (!budget.feasible(rounded.magnitude)) {
    std::size_t best = rounded.magnitude.size();
    double best_extra = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rounded.magnitude.size(); ++i) {
      const std::uint32_t j = rounded.magnitude[i];
      if (j == 0) continue;
      const double extra = averaged.cell_values[i].norm() - grid.value(j - 1);
      if (extra < best_extra) {
        best_extra = extra;
        best = i;
      }
    }
    if (best == rounded.magnitude.size()) {
      throw InvalidArgument("budget cannot be met even by the zero function");
    }
    const std::uint32_t j = --rounded.magnitude[best];
    const auto& v = averaged.cell_values[best];
    rounded.values.cell_values[best] = rescale(v, v.norm(), grid.value(j));
    ++repairs;
  }
  return repairs;
}

}  // namespace

Projection project_to_net(const SampledFn& x, const Partition& partition,
                          const MagnitudeGrid& grid, const DirectionNet& net,
                          const Budget& budget) {
  if (x.dim() != net.dim()) {
    throw InvalidArgument("function dimension differs from the net dimension");
  }
  const double p = budget.p();
  const double norm = lp_norm(x, partition, p);
  if (norm > budget.r() * (1.0 + 1e-10)) {
    throw InvalidArgument("project_to_net: input lies outside the L_p ball");
  }

  Projection out;
  out.report.measure_above_gamma = measure_above(x, partition, grid.gamma());
  out.clipped = clip_to_gamma(x, grid.gamma());
  out.report.clip = displacement(x, out.clipped, partition, p);

  out.averaged = cell_average(out.clipped, partition);
  out.report.average =
      displacement(out.clipped, to_sampled(out.averaged, partition), partition, p);

  out.rounded = round_magnitude(out.averaged, grid);
  out.report.budget_repairs = repair_budget(out.rounded, out.averaged, grid, budget);
  out.report.round =
      displacement(out.averaged, out.rounded.values, partition, p);

  out.snapped = snap_direction(out.rounded, grid, net);
  out.report.snap =
      displacement(out.rounded.values, out.snapped.values, partition, p);
  out.report.budget_usage = budget.usage(out.snapped.member.magnitude);
  return out;
}

Projection project_to_net(const SampledFn& x, double gamma,
                          const Partition& partition, const MagnitudeGrid& grid,
                          const DirectionNet& net, double p, double r) {
  if (gamma != grid.gamma()) {
    throw InvalidArgument("gamma differs from the magnitude grid's gamma");
  }
  return project_to_net(x, partition, grid, net, Budget(partition, grid, p, r));
}

}  // namespace hsnet
