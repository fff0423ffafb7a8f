#include "hsnet/budget.hpp"

#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsnet {

namespace mp = boost::multiprecision;

namespace {
constexpr double kFloorTolerance = 1e-12;
}  // namespace

MagnitudeGrid::MagnitudeGrid(double gamma, std::uint32_t intervals)
    : gamma_(gamma), intervals_(intervals) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("gamma must be positive");
  }
  if (intervals < 1) throw InvalidArgument("magnitude grid needs a >= 1");
  step_ = gamma / intervals;
  values_.resize(static_cast<std::size_t>(intervals) + 1);
  for (std::uint32_t j = 0; j < intervals; ++j) {
    values_[j] = gamma * j / intervals;
  }
  values_[intervals] = gamma;
}

std::uint32_t MagnitudeGrid::floor_index(double magnitude) const {
  if (!(magnitude > 0.0)) return 0;
  // Normalizing or averaging can land an ulp below a grid value; treat
  // anything within a relative 1e-12 of z_j as z_j.
  magnitude *= 1.0 + kFloorTolerance;
  if (magnitude >= gamma_) return intervals_;
  double guess = std::floor(magnitude / step_);
  guess = std::clamp(guess, 0.0, static_cast<double>(intervals_));
  auto j = static_cast<std::uint32_t>(guess);
  while (j < intervals_ && values_[j + 1] <= magnitude) ++j;
  while (j > 0 && values_[j] > magnitude) --j;
  return j;
}

MagnitudeGrid build_magnitude_grid(double gamma, std::uint32_t intervals) {
  return MagnitudeGrid(gamma, intervals);
}

namespace {

mp::cpp_rational to_rational(double v) {
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // mant in [0.5, 1): scale to a 53-bit integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  mp::cpp_rational q(scaled);
  exp -= 53;
  mp::cpp_int pow2 = mp::cpp_int(1) << std::abs(exp);
  if (exp >= 0) {
    q *= mp::cpp_rational(pow2);
  } else {
    q /= mp::cpp_rational(pow2);
  }
  return q;
}

mp::cpp_rational rational_pow(const mp::cpp_rational& base, int e) {
  mp::cpp_rational out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Budget::Budget(const Partition& partition, const MagnitudeGrid& grid, double p,
               double r, double slack)
    : p_(p), r_(r), slack_(slack), grid_values_(grid.values()) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be > 0");
  if (!(slack >= 0.0)) throw InvalidArgument("budget slack must be >= 0");
  measures_.reserve(partition.size());
  for (const auto& c : partition.cells()) measures_.push_back(c.measure);
  if (measures_.empty()) throw InvalidArgument("partition has no cells");
  capacity_ = std::pow(r, p);

  const std::size_t n_cells = measures_.size();
  const std::uint32_t a = grid.intervals();

  bool equal_measures = true;
  for (double m : measures_) equal_measures &= (m == measures_.front());
  const bool integral_p = p == std::round(p) && p <= 16.0;

  if (equal_measures && integral_p) {
    const int ip = static_cast<int>(p);
    const double top = std::pow(static_cast<double>(a), ip);
    const double limit = std::ldexp(1.0, 62);
    if (top * static_cast<double>(n_cells) < limit) {
      arithmetic_ = BudgetArithmetic::exact_integer;
      unit_costs_.resize(static_cast<std::size_t>(a) + 1);
      for (std::uint32_t j = 0; j <= a; ++j) {
        std::uint64_t v = 1;
        for (int e = 0; e < ip; ++e) v *= j;
        unit_costs_[j] = v;
      }
      // sum j^p * mu * (gamma / a)^p <= r^p  <=>  sum j^p <= r^p a^p / (mu gamma^p)
      const mp::cpp_rational bound =
          rational_pow(to_rational(r), ip) *
          rational_pow(mp::cpp_rational(a), ip) /
          (to_rational(measures_.front()) *
           rational_pow(to_rational(grid.gamma()), ip));
      const mp::cpp_int floor_bound =
          mp::numerator(bound) / mp::denominator(bound);
      const std::uint64_t max_total = unit_costs_[a] * n_cells;
      unit_capacity_ = floor_bound >= max_total
                           ? max_total
                           : floor_bound.convert_to<std::uint64_t>();
      return;
    }
  }

  arithmetic_ = BudgetArithmetic::floating;
  cell_costs_.resize(n_cells * grid_values_.size());
  for (std::size_t i = 0; i < n_cells; ++i) {
    for (std::size_t j = 0; j < grid_values_.size(); ++j) {
      cell_costs_[i * grid_values_.size() + j] =
          measures_[i] * std::pow(grid_values_[j], p);
    }
  }
  float_capacity_ = capacity_ * (1.0 + slack_);
}

bool Budget::feasible(std::span<const std::uint32_t> magnitudes) const {
  if (magnitudes.size() != measures_.size()) {
    throw InvalidArgument("magnitude profile length differs from cell count");
  }
  for (auto j : magnitudes) {
    if (j >= grid_values_.size()) throw InvalidArgument("magnitude index out of range");
  }
  if (arithmetic_ == BudgetArithmetic::exact_integer) {
    std::uint64_t used = 0;
    for (auto j : magnitudes) used += unit_costs_[j];
    return used <= unit_capacity_;
  }
  double used = 0.0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    used += cell_cost(i, magnitudes[i]);
  }
  return used <= float_capacity_;
}

double Budget::usage(std::span<const std::uint32_t> magnitudes) const {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double term =
        measures_.at(i) * std::pow(grid_values_.at(magnitudes[i]), p_);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace hsnet
