#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace hsnet {

using Point = Eigen::VectorXd;

//! Axis-aligned compact box in R^k, k in {1, 2, 3}.
class Domain {
 public:
  Domain(Point lower, Point upper);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const Point& lower() const noexcept { return lower_; }
  const Point& upper() const noexcept { return upper_; }
  Point extent() const { return upper_ - lower_; }

  double measure() const noexcept { return measure_; }
  double diameter() const noexcept { return diameter_; }

  bool contains(const Point& x, double tol = 0.0) const;

 private:
  Point lower_;
  Point upper_;
  double measure_;
  double diameter_;
};

Domain unit_box(int dim);

struct QuadNode {
  Point point;
  double weight;
};

struct Cell {
  std::size_t index = 0;
  Point lower;
  Point upper;
  Point center;
  double measure = 0.0;
  double diameter = 0.0;
  // Range of this cell's nodes in Partition::nodes().
  std::size_t node_begin = 0;
  std::size_t node_end = 0;
};

/*!
  Uniform grid partition of a box.

  Cells are ordered lexicographically by their per-axis indices with the last
  axis varying fastest. Every cell has the same measure, the product of the
  per-axis widths, so budget arithmetic over cells sees identical values.
*/
class Partition {
 public:
  const Domain& domain() const noexcept { return domain_; }
  double delta() const noexcept { return delta_; }
  const std::vector<int>& divisions() const noexcept { return divisions_; }

  std::size_t size() const noexcept { return cells_.size(); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_.at(i); }

  bool has_quadrature() const noexcept { return nodes_per_axis_ > 0; }
  int nodes_per_axis() const noexcept { return nodes_per_axis_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const QuadNode> nodes() const noexcept { return nodes_; }
  std::span<const QuadNode> nodes(const Cell& c) const;
  //! Cell index owning each node.
  const std::vector<std::size_t>& node_cells() const noexcept {
    return node_cells_;
  }

  double max_cell_diameter() const;
  double total_measure() const;

 private:
  friend Partition build_partition(const Domain& domain, double delta);
  friend Partition quadrature(const Domain& domain, Partition partition,
                              int nodes_per_axis);

  explicit Partition(Domain d) : domain_(std::move(d)) {}

  Domain domain_;
  double delta_ = 0.0;
  std::vector<int> divisions_;
  std::vector<Cell> cells_;
  int nodes_per_axis_ = 0;
  std::vector<QuadNode> nodes_;
  std::vector<std::size_t> node_cells_;
};

//! Grid Delta-partition whose cell diagonals are all <= delta.
Partition build_partition(const Domain& domain, double delta);

//! Populates tensor-product Gauss-Legendre nodes on every cell.
Partition quadrature(const Domain& domain, Partition partition,
                     int nodes_per_axis);

inline Partition quadrature_grid(const Domain& domain, double delta,
                                 int nodes_per_axis) {
  return quadrature(domain, build_partition(domain, delta), nodes_per_axis);
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

}  // namespace hsnet
