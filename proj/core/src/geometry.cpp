#include "hsnet/geometry.hpp"

#include "hsnet/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hsnet {

Domain::Domain(Point lower, Point upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1 || lower_.size() > 3) {
    throw InvalidArgument("domain dimension must be 1, 2 or 3");
  }
  if (lower_.size() != upper_.size()) {
    throw InvalidArgument("domain lower/upper dimension mismatch");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) ||
        !(upper_[i] > lower_[i])) {
      throw InvalidArgument("domain needs upper[" + std::to_string(i) +
                            "] > lower[" + std::to_string(i) + "]");
    }
  }
  measure_ = (upper_ - lower_).prod();
  diameter_ = (upper_ - lower_).norm();
}

bool Domain::contains(const Point& x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
  }
  return true;
}

Domain unit_box(int dim) {
  return Domain(Point::Zero(dim), Point::Ones(dim));
}

std::span<const QuadNode> Partition::nodes(const Cell& c) const {
  return std::span<const QuadNode>(nodes_).subspan(c.node_begin,
                                                   c.node_end - c.node_begin);
}

double Partition::max_cell_diameter() const {
  double d = 0.0;
  for (const auto& c : cells_) d = std::max(d, c.diameter);
  return d;
}

double Partition::total_measure() const {
  double s = 0.0;
  for (const auto& c : cells_) s += c.measure;
  return s;
}

namespace {

std::vector<Cell> grid_cells(const Domain& domain,
                             const std::vector<int>& divisions) {
  const int k = domain.dim();
  std::vector<double> width(k);
  double cell_measure = 1.0;
  for (int j = 0; j < k; ++j) {
    width[j] = (domain.upper()[j] - domain.lower()[j]) / divisions[j];
    cell_measure *= width[j];
  }

  auto corner = [&](int axis, int idx) {
    if (idx == divisions[axis]) return domain.upper()[axis];
    return domain.lower()[axis] + idx * width[axis];
  };

  std::size_t total = 1;
  for (int d : divisions) total *= static_cast<std::size_t>(d);

  std::vector<Cell> cells;
  cells.reserve(total);
  std::vector<int> idx(k, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Cell c;
    c.index = flat;
    c.lower.resize(k);
    c.upper.resize(k);
    for (int j = 0; j < k; ++j) {
      c.lower[j] = corner(j, idx[j]);
      c.upper[j] = corner(j, idx[j] + 1);
    }
    c.center = 0.5 * (c.lower + c.upper);
    c.measure = cell_measure;
    c.diameter = (c.upper - c.lower).norm();
    cells.push_back(std::move(c));

    for (int j = k - 1; j >= 0; --j) {
      if (++idx[j] < divisions[j]) break;
      idx[j] = 0;
    }
  }
  return cells;
}

}  // namespace

Partition build_partition(const Domain& domain, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("partition delta must be positive");
  }
  const int k = domain.dim();
  const double root_k = std::sqrt(static_cast<double>(k));
  std::vector<int> divisions(k);
  for (int j = 0; j < k; ++j) {
    const double len = domain.upper()[j] - domain.lower()[j];
    const double want = std::ceil(root_k * len / delta);
    if (want > 1e7) throw InvalidArgument("partition delta too small");
    divisions[j] = std::max(1, static_cast<int>(want));
  }

  Partition part(domain);
  part.delta_ = delta;
  // Rounding in the corner coordinates can push a diagonal a few ulps past
  // delta; refine the widest axis until every cell fits.
  for (;;) {
    part.cells_ = grid_cells(domain, divisions);
    if (part.max_cell_diameter() <= delta) break;
    int widest = 0;
    double wmax = 0.0;
    for (int j = 0; j < k; ++j) {
      const double w = (domain.upper()[j] - domain.lower()[j]) / divisions[j];
      if (w > wmax) {
        wmax = w;
        widest = j;
      }
    }
    ++divisions[widest];
  }
  part.divisions_ = std::move(divisions);
  return part;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Partition quadrature(const Domain& domain, Partition partition,
                     int nodes_per_axis) {
  if (nodes_per_axis < 1) {
    throw InvalidArgument("nodes_per_axis must be >= 1");
  }
  if (partition.domain().dim() != domain.dim() ||
      partition.domain().lower() != domain.lower() ||
      partition.domain().upper() != domain.upper()) {
    throw InvalidArgument("partition does not belong to this domain");
  }
  const int k = domain.dim();
  const GaussRule rule = gauss_legendre(nodes_per_axis);
  std::size_t per_cell = 1;
  for (int j = 0; j < k; ++j) per_cell *= static_cast<std::size_t>(nodes_per_axis);

  partition.nodes_.clear();
  partition.node_cells_.clear();
  partition.nodes_.reserve(per_cell * partition.cells_.size());
  partition.node_cells_.reserve(per_cell * partition.cells_.size());

  std::vector<int> idx(k);
  for (auto& cell : partition.cells_) {
    cell.node_begin = partition.nodes_.size();
    const Point half = 0.5 * (cell.upper - cell.lower);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t flat = 0; flat < per_cell; ++flat) {
      QuadNode node{Point(k), 1.0};
      for (int j = 0; j < k; ++j) {
        node.point[j] = cell.center[j] + half[j] * rule.nodes[idx[j]];
        node.weight *= half[j] * rule.weights[idx[j]];
      }
      partition.nodes_.push_back(std::move(node));
      partition.node_cells_.push_back(cell.index);
      for (int j = k - 1; j >= 0; --j) {
        if (++idx[j] < nodes_per_axis) break;
        idx[j] = 0;
      }
    }
    cell.node_end = partition.nodes_.size();
  }
  partition.nodes_per_axis_ = nodes_per_axis;
  return partition;
}

}  // namespace hsnet
