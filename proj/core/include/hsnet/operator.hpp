#pragma once

#include "hsnet/functions.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/kernel.hpp"
#include "hsnet/norms.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace hsnet {

class DirectionNet;
class MagnitudeGrid;

/*!
  Quadrature realization of y(xi) = integral over Omega of K(xi, s) x(s) ds.

  Inputs live on the input partition's nodes (or its cells); images live on
  the output partition's nodes. Two matrices are built once: the node matrix
  with quadrature weights folded in, of size (O m) x (W n), and the cell
  integral matrix of size (O m) x (N n) whose blocks are the integrals of
  K(xi_o, .) over each cell. Flattened vectors put a node's components
  contiguously, matching the column-major layout of SampledFn.
*/
class DiscreteOperator {
 public:
  DiscreteOperator(const Kernel& kernel, const Partition& input,
                   const Partition& output);

  int rows() const noexcept { return m_; }
  int cols() const noexcept { return n_; }
  const Partition& input() const noexcept { return *input_; }
  const Partition& output() const noexcept { return *output_; }

  SampledFn apply(const SampledFn& x) const;
  SampledFn apply(const PiecewiseConstFn& x) const;
  //! Evaluates the kernel afresh instead of using the cached matrices.
  SampledFn apply_direct(const PiecewiseConstFn& x) const;

  const Eigen::MatrixXd& node_matrix() const noexcept { return node_matrix_; }
  const Eigen::MatrixXd& cell_matrix() const noexcept { return cell_matrix_; }

 private:
  const Kernel* kernel_;
  const Partition* input_;
  const Partition* output_;
  int m_;
  int n_;
  Eigen::MatrixXd node_matrix_;
  Eigen::MatrixXd cell_matrix_;
};

//! Images of net members, in input order.
std::vector<SampledFn> image_of_family(const DiscreteOperator& op,
                                       std::span<const NetMember> family,
                                       const MagnitudeGrid& grid,
                                       const DirectionNet& net);

//! Output partition used when none is configured: cells no wider than
//! min(delta, diameter / 4).
double default_output_delta(const Domain& domain, double partition_delta);

}  // namespace hsnet
