#pragma once

// Reference computations that do not go through the library's budget,
// dynamic program or enumerator.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace hsnet::testing {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Exact decimal rational num / den.
inline Rational ratio(std::int64_t num, std::int64_t den) {
  return Rational(Integer(num), Integer(den));
}

inline Rational rational_pow(const Rational& base, int exponent) {
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

struct CountCase {
  int cells;            // N equal cells partitioning a unit-measure domain
  int intervals;        // a
  int directions;       // c
  Rational gamma;
  Rational r;
};

// Family size by visiting every magnitude profile in {0..a}^N. Integer
// exponents compare exactly: sum (1/N) (j gamma / a)^p <= r^p.
inline Integer brute_force_count(const CountCase& c, int p) {
  const Rational mu = ratio(1, c.cells);
  const Rational cap = rational_pow(c.r, p);
  std::vector<Rational> cost(static_cast<std::size_t>(c.intervals) + 1);
  for (int j = 0; j <= c.intervals; ++j) {
    cost[static_cast<std::size_t>(j)] =
        mu * rational_pow(c.gamma * ratio(j, c.intervals), p);
  }
  Integer total = 0;
  std::vector<int> profile(static_cast<std::size_t>(c.cells), 0);
  for (;;) {
    Rational used = 0;
    Integer weight = 1;
    for (int j : profile) {
      used += cost[static_cast<std::size_t>(j)];
      if (j > 0) weight *= c.directions;
    }
    if (used <= cap) total += weight;
    std::size_t i = 0;
    while (i < profile.size() && ++profile[i] > c.intervals) profile[i++] = 0;
    if (i == profile.size()) break;
  }
  return total;
}

// Same visit in long double for non-integer exponents, with a relative slack
// of 1e-12 on r^p.
inline Integer brute_force_count(const CountCase& c, long double p) {
  const long double mu = 1.0L / c.cells;
  const long double gamma = c.gamma.convert_to<long double>();
  const long double cap =
      std::pow(c.r.convert_to<long double>(), p) * (1.0L + 1e-12L);
  Integer total = 0;
  std::vector<int> profile(static_cast<std::size_t>(c.cells), 0);
  for (;;) {
    long double used = 0.0L;
    Integer weight = 1;
    for (int j : profile) {
      used += mu * std::pow(gamma * j / c.intervals, p);
      if (j > 0) weight *= c.directions;
    }
    if (used <= cap) total += weight;
    std::size_t i = 0;
    while (i < profile.size() && ++profile[i] > c.intervals) profile[i++] = 0;
    if (i == profile.size()) break;
  }
  return total;
}

// Exact integral of prod_a s_a^{e_a} over the box [lo, hi].
inline double monomial_integral(const std::vector<double>& lo,
                                const std::vector<double>& hi,
                                const std::vector<int>& e) {
  double out = 1.0;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    out *= (std::pow(hi[a], e[a] + 1) - std::pow(lo[a], e[a] + 1)) / (e[a] + 1);
  }
  return out;
}

}  // namespace hsnet::testing
