#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hsnet {

class Partition;

using BigInt = boost::multiprecision::cpp_int;

//! Uniform grid {0 = z_0, z_1, ..., z_a = gamma} with step gamma / a.
class MagnitudeGrid {
 public:
  MagnitudeGrid(double gamma, std::uint32_t intervals);

  double gamma() const noexcept { return gamma_; }
  std::uint32_t intervals() const noexcept { return intervals_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  double value(std::uint32_t j) const { return values_.at(j); }
  const std::vector<double>& values() const noexcept { return values_; }

  //! Largest j with z_j <= magnitude (1 + 1e-12); magnitudes >= gamma map to a.
  std::uint32_t floor_index(double magnitude) const;

 private:
  double gamma_;
  std::uint32_t intervals_;
  double step_;
  std::vector<double> values_;
};

MagnitudeGrid build_magnitude_grid(double gamma, std::uint32_t intervals);

enum class BudgetArithmetic { exact_integer, floating };

/*!
  The integral budget  sum_i mu(cell_i) * z_{j_i}^p <= r^p  over magnitude
  profiles (j_1, ..., j_N).

  With an integer exponent and equal cell measures the constraint is decided
  exactly: it is equivalent to  sum_i j_i^p <= B  with
  B = floor(r^p a^p / (mu gamma^p))  computed in rational arithmetic.
  Otherwise per-cell costs mu_i * z_j^p are summed left to right in double
  precision and compared against r^p * (1 + slack). Both the dynamic program
  and the enumerator use this same predicate.
*/
class Budget {
 public:
  Budget(const Partition& partition, const MagnitudeGrid& grid, double p,
         double r, double slack = 1e-12);

  BudgetArithmetic arithmetic() const noexcept { return arithmetic_; }
  double p() const noexcept { return p_; }
  double r() const noexcept { return r_; }
  //! Relative slack on r^p; zero in exact mode.
  double slack() const noexcept {
    return arithmetic_ == BudgetArithmetic::exact_integer ? 0.0 : slack_;
  }
  std::size_t cells() const noexcept { return measures_.size(); }
  std::uint32_t levels() const noexcept {
    return static_cast<std::uint32_t>(grid_values_.size());
  }
  const std::vector<double>& cell_measures() const noexcept { return measures_; }
  const std::vector<double>& grid_values() const noexcept { return grid_values_; }

  bool feasible(std::span<const std::uint32_t> magnitudes) const;
  //! Compensated sum of mu_i * z_{j_i}^p.
  double usage(std::span<const std::uint32_t> magnitudes) const;
  double capacity() const noexcept { return capacity_; }

  // Exact mode: integer units j^p against unit_capacity().
  std::uint64_t unit_cost(std::uint32_t j) const { return unit_costs_.at(j); }
  std::uint64_t unit_capacity() const noexcept { return unit_capacity_; }

  // Floating mode: per-cell cost and the slackened capacity.
  double cell_cost(std::size_t cell, std::uint32_t j) const {
    return cell_costs_[cell * grid_values_.size() + j];
  }
  double float_capacity() const noexcept { return float_capacity_; }

 private:
  BudgetArithmetic arithmetic_ = BudgetArithmetic::floating;
  double p_;
  double r_;
  double slack_;
  double capacity_;
  std::vector<double> measures_;
  std::vector<double> grid_values_;

  std::vector<std::uint64_t> unit_costs_;
  std::uint64_t unit_capacity_ = 0;

  std::vector<double> cell_costs_;
  double float_capacity_ = 0.0;
};

}  // namespace hsnet
