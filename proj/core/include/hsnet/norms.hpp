#pragma once

#include "hsnet/functions.hpp"

namespace hsnet {

class Partition;

//! Conjugate exponent pair, 1/p + 1/q = 1.
struct Exponents {
  double p;
  double q;

  static Exponents from_p(double p);
};

//! (sum_w weight_w * |x(node_w)|^p)^(1/p) over the partition's quadrature.
double lp_norm(const SampledFn& x, const Partition& partition, double p);
//! Closed form (sum_i mu_i * |x_i|^p)^(1/p).
double lp_norm(const PiecewiseConstFn& x, const Partition& partition, double p);

double lp_distance(const SampledFn& a, const SampledFn& b,
                   const Partition& partition, double p);
double lp_distance(const PiecewiseConstFn& a, const PiecewiseConstFn& b,
                   const Partition& partition, double p);

//! max over nodes of |a(node) - b(node)|.
double sup_distance(const SampledFn& a, const SampledFn& b);
double sup_distance(const PiecewiseConstFn& a, const PiecewiseConstFn& b);

}  // namespace hsnet
