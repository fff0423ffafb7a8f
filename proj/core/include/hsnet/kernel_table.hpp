#pragma once

#include "hsnet/geometry.hpp"
#include "hsnet/kernel.hpp"

#include <filesystem>
#include <vector>

namespace hsnet {

/*!
  Kernel sampled on a tensor grid over (xi, s) in R^{2k}.

  Axes 0..k-1 belong to xi and k..2k-1 to s. `values` is row-major over the
  grid with the last axis fastest; each grid point holds its m x n matrix,
  itself row-major.

  File layout:

      hsnet-kernel-table 1
      rows <m>
      cols <n>
      dim <k>
      shape <2k node counts>
      lower <2k reals>
      upper <2k reals>
      encoding text|binary-le
      values
      <m*n*prod(shape) float64 values>

  Text values are whitespace separated. The binary variant stores raw IEEE 754
  doubles in little-endian byte order immediately after the "values" line.
*/
struct KernelTable {
  int rows = 1;
  int cols = 1;
  int dim = 1;
  std::vector<int> shape;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> values;

  std::size_t grid_points() const;
  //! Throws InvalidArgument when sizes or bounds are inconsistent.
  void validate() const;
};

enum class TableEncoding { text, binary_le };

KernelTable read_kernel_table(const std::filesystem::path& path);
void write_kernel_table(const KernelTable& table,
                        const std::filesystem::path& path,
                        TableEncoding encoding = TableEncoding::text);

//! Samples `kernel` on a grid over domain x domain, `nodes` points per axis.
KernelTable tabulate(const Kernel& kernel, const Domain& domain, int nodes);

/*!
  Multilinear interpolant of the table, restricted to `domain`.

  The domain must lie inside the table's box in both arguments. Bounds are
  certified for the interpolant: its values are convex combinations of node
  matrices, and along each s axis its slope is a convex combination of edge
  slopes.
*/
Kernel make_table_kernel(const KernelTable& table, const Domain& domain,
                         MatrixNorm norm = MatrixNorm::spectral);

}  // namespace hsnet
