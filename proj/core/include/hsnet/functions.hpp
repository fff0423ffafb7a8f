#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hsnet {

class Partition;
class MagnitudeGrid;
class DirectionNet;

//! Function values at quadrature nodes; column j is the value at node j.
struct SampledFn {
  Eigen::MatrixXd values;

  int dim() const noexcept { return static_cast<int>(values.rows()); }
  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(values.cols());
  }

  static SampledFn zero(int dim, std::size_t nodes) {
    return {Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(nodes))};
  }
};

//! Piecewise-constant function in raw form: one vector per partition cell.
struct PiecewiseConstFn {
  std::vector<Eigen::VectorXd> cell_values;

  int dim() const noexcept {
    return cell_values.empty() ? 0 : static_cast<int>(cell_values.front().size());
  }
  std::size_t cell_count() const noexcept { return cell_values.size(); }

  static PiecewiseConstFn zero(int dim, std::size_t cells) {
    return {std::vector<Eigen::VectorXd>(cells, Eigen::VectorXd::Zero(dim))};
  }
};

/*!
  Member of the finite input family in net form.

  Cell i carries magnitude index j_i into the magnitude grid and direction
  index l_i into the direction net. Zero-magnitude cells always carry
  direction 0 so each function has exactly one representation.
*/
struct NetMember {
  std::vector<std::uint32_t> magnitude;
  std::vector<std::uint32_t> direction;

  std::size_t cell_count() const noexcept { return magnitude.size(); }

  static NetMember zero(std::size_t cells) {
    return {std::vector<std::uint32_t>(cells, 0),
            std::vector<std::uint32_t>(cells, 0)};
  }

  friend auto operator<=>(const NetMember&, const NetMember&) = default;
  friend bool operator==(const NetMember&, const NetMember&) = default;
};

PiecewiseConstFn realize(const NetMember& member, const MagnitudeGrid& grid,
                         const DirectionNet& net);

//! Values of a piecewise-constant function at the partition's nodes.
SampledFn to_sampled(const PiecewiseConstFn& x, const Partition& partition);

}  // namespace hsnet
