#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace hsnet {

using Rng = std::mt19937_64;

//! Uniform point on the unit sphere of R^n via a normalized Gaussian vector.
inline Eigen::VectorXd random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double norm = v.norm();
    if (norm > 1e-300) return v / norm;
  }
}

}  // namespace hsnet
