#include "hsnet/operator.hpp"

#include "hsnet/budget.hpp"
#include "hsnet/error.hpp"
#include "hsnet/parallel.hpp"
#include "hsnet/sphere_net.hpp"

#include <algorithm>
#include <cmath>

namespace hsnet {

Exponents Exponents::from_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("p must be a finite real greater than 1");
  }
  return {p, p / (p - 1.0)};
}

namespace {

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("norm exponent must be a finite real greater than 1");
  }
}

void check_nodes(const SampledFn& x, const Partition& partition) {
  if (x.node_count() != partition.node_count()) {
    throw InvalidArgument("sampled function has " +
                          std::to_string(x.node_count()) +
                          " nodes; the partition has " +
                          std::to_string(partition.node_count()));
  }
}

void check_cells(const PiecewiseConstFn& x, const Partition& partition) {
  if (x.cell_count() != partition.size()) {
    throw InvalidArgument("piecewise function does not match the partition");
  }
}

double weighted_lp(const Eigen::MatrixXd& diff, const Partition& partition,
                   double p) {
  const auto nodes = partition.nodes();
  double sum = 0.0;
  for (std::size_t w = 0; w < nodes.size(); ++w) {
    const double v = diff.col(static_cast<Eigen::Index>(w)).norm();
    if (v != 0.0) sum += nodes[w].weight * std::pow(v, p);
  }
  return std::pow(sum, 1.0 / p);
}

double cell_lp(const PiecewiseConstFn& a, const PiecewiseConstFn* b,
               const Partition& partition, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    const double v = b ? (a.cell_values[i] - b->cell_values[i]).norm()
                       : a.cell_values[i].norm();
    if (v != 0.0) sum += partition.cell(i).measure * std::pow(v, p);
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace

double lp_norm(const SampledFn& x, const Partition& partition, double p) {
  check_p(p);
  check_nodes(x, partition);
  return weighted_lp(x.values, partition, p);
}

double lp_norm(const PiecewiseConstFn& x, const Partition& partition, double p) {
  check_p(p);
  check_cells(x, partition);
  return cell_lp(x, nullptr, partition, p);
}

double lp_distance(const SampledFn& a, const SampledFn& b,
                   const Partition& partition, double p) {
  check_p(p);
  check_nodes(a, partition);
  check_nodes(b, partition);
  if (a.dim() != b.dim()) throw InvalidArgument("dimension mismatch");
  return weighted_lp(a.values - b.values, partition, p);
}

double lp_distance(const PiecewiseConstFn& a, const PiecewiseConstFn& b,
                   const Partition& partition, double p) {
  check_p(p);
  check_cells(a, partition);
  check_cells(b, partition);
  return cell_lp(a, &b, partition, p);
}

double sup_distance(const SampledFn& a, const SampledFn& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw InvalidArgument("sup_distance: shape mismatch");
  }
  if (a.values.cols() == 0) return 0.0;
  return (a.values - b.values).colwise().norm().maxCoeff();
}

double sup_distance(const PiecewiseConstFn& a, const PiecewiseConstFn& b) {
  if (a.cell_count() != b.cell_count()) {
    throw InvalidArgument("sup_distance: cell count mismatch");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    best = std::max(best, (a.cell_values[i] - b.cell_values[i]).norm());
  }
  return best;
}

DiscreteOperator::DiscreteOperator(const Kernel& kernel, const Partition& input,
                                   const Partition& output)
    : kernel_(&kernel),
      input_(&input),
      output_(&output),
      m_(kernel.rows()),
      n_(kernel.cols()) {
  if (!input.has_quadrature() || !output.has_quadrature()) {
    throw InvalidArgument("operator partitions need quadrature nodes");
  }
  if (input.domain().dim() != output.domain().dim()) {
    throw InvalidArgument("input and output domains differ in dimension");
  }
  const auto in_nodes = input.nodes();
  const auto out_nodes = output.nodes();
  const auto O = static_cast<Eigen::Index>(out_nodes.size());
  const auto W = static_cast<Eigen::Index>(in_nodes.size());
  const auto N = static_cast<Eigen::Index>(input.size());
  node_matrix_.resize(O * m_, W * n_);
  cell_matrix_ = Eigen::MatrixXd::Zero(O * m_, N * n_);

  const auto& owner = input.node_cells();
  parallel_for(out_nodes.size(), [&](std::size_t o) {
    const auto row = static_cast<Eigen::Index>(o) * m_;
    Eigen::MatrixXd value(m_, n_);
    for (Eigen::Index w = 0; w < W; ++w) {
      const auto& node = in_nodes[static_cast<std::size_t>(w)];
      kernel.evaluate(out_nodes[o].point, node.point, value);
      value *= node.weight;
      node_matrix_.block(row, w * n_, m_, n_) = value;
      const auto cell = static_cast<Eigen::Index>(owner[static_cast<std::size_t>(w)]);
      cell_matrix_.block(row, cell * n_, m_, n_) += value;
    }
  });
}

namespace {

Eigen::VectorXd stack(const PiecewiseConstFn& x, int n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.cell_count()) * n);
  for (std::size_t i = 0; i < x.cell_count(); ++i) {
    v.segment(static_cast<Eigen::Index>(i) * n, n) = x.cell_values[i];
  }
  return v;
}

SampledFn unstack(const Eigen::VectorXd& y, int m, std::size_t nodes) {
  SampledFn out;
  out.values = Eigen::Map<const Eigen::MatrixXd>(y.data(), m,
                                                 static_cast<Eigen::Index>(nodes));
  return out;
}

}  // namespace

SampledFn DiscreteOperator::apply(const SampledFn& x) const {
  if (x.dim() != n_) throw InvalidArgument("input dimension differs from kernel columns");
  check_nodes(x, *input_);
  const Eigen::Map<const Eigen::VectorXd> flat(x.values.data(), x.values.size());
  return unstack(node_matrix_ * flat, m_, output_->node_count());
}

SampledFn DiscreteOperator::apply(const PiecewiseConstFn& x) const {
  check_cells(x, *input_);
  if (x.dim() != n_) throw InvalidArgument("input dimension differs from kernel columns");
  return unstack(cell_matrix_ * stack(x, n_), m_, output_->node_count());
}

SampledFn DiscreteOperator::apply_direct(const PiecewiseConstFn& x) const {
  check_cells(x, *input_);
  if (x.dim() != n_) throw InvalidArgument("input dimension differs from kernel columns");
  const auto out_nodes = output_->nodes();
  SampledFn y = SampledFn::zero(m_, out_nodes.size());
  Eigen::MatrixXd value(m_, n_);
  for (std::size_t o = 0; o < out_nodes.size(); ++o) {
    for (const auto& cell : input_->cells()) {
      Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(m_, n_);
      for (const auto& node : input_->nodes(cell)) {
        kernel_->evaluate(out_nodes[o].point, node.point, value);
        integral += node.weight * value;
      }
      y.values.col(static_cast<Eigen::Index>(o)) += integral * x.cell_values[cell.index];
    }
  }
  return y;
}

std::vector<SampledFn> image_of_family(const DiscreteOperator& op,
                                       std::span<const NetMember> family,
                                       const MagnitudeGrid& grid,
                                       const DirectionNet& net) {
  if (net.dim() != op.cols()) {
    throw InvalidArgument("net dimension differs from kernel columns");
  }
  std::vector<SampledFn> out(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    out[i] = op.apply(realize(family[i], grid, net));
  });
  return out;
}

double default_output_delta(const Domain& domain, double partition_delta) {
  return std::min(partition_delta, domain.diameter() / 4.0);
}

}  // namespace hsnet
