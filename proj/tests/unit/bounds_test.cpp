#include "hsnet/bounds.hpp"
#include "hsnet/error.hpp"
#include "hsnet/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace hsnet {
namespace {

Kernel scalar(const ScalarKernel& k) {
  return make_block_kernel(1, 1, {{k, Eigen::MatrixXd::Ones(1, 1)}});
}

KernelMetrics unit_constant() { return certified_metrics(scalar(constant_kernel(1.0))); }

TEST(ErrorBound, WorkedExample) {
  const BoundBreakdown b =
      error_bound({2.0, 1.0, 1.0, 0.0, 2.0, 1.0, 0.1, 0.1}, unit_constant());
  EXPECT_DOUBLE_EQ(b.c_star, 2.0);
  EXPECT_DOUBLE_EQ(b.tail, 1.0);
  EXPECT_DOUBLE_EQ(b.psi, 0.0);
  EXPECT_DOUBLE_EQ(b.phi, 0.1);
  EXPECT_DOUBLE_EQ(b.alpha, 0.2);
  EXPECT_DOUBLE_EQ(b.total, 1.3);
  EXPECT_EQ(b.provenance, MetricsProvenance::certified);
}

TEST(ErrorBound, ZeroKernelLeavesLambda) {
  const KernelMetrics m = certified_metrics(zero_kernel(2, 2));
  const BoundBreakdown b = error_bound({3.0, 2.0, 1.5, 0.25, 0.5, 0.3, 0.1, 1.0}, m);
  EXPECT_EQ(b.tail + b.psi + b.phi + b.alpha, 0.0);
  EXPECT_EQ(b.total, 0.25);
}

TEST(ErrorBound, TotalIsTheOrderedSum) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  const KernelMetrics m = certified_metrics(scalar(gaussian_kernel(unit_box(2), 3.0)));
  for (int i = 0; i < 200; ++i) {
    const double gamma = 3.0 * u(rng);
    const BoundParameters bp{1.1 + 3 * u(rng), u(rng), 2 * u(rng), u(rng), gamma,
                             u(rng), gamma * u(rng), 2 * u(rng)};
    const BoundBreakdown b = error_bound(bp, m);
    EXPECT_EQ(b.total, (((b.lambda + b.tail) + b.psi) + b.phi) + b.alpha);
    for (double t : {b.lambda, b.tail, b.psi, b.phi, b.alpha}) EXPECT_GE(t, 0.0);
    // Independent evaluation of the closed forms.
    const double q = bp.p / (bp.p - 1);
    const double c = 2 * std::pow(bp.r, bp.p) * std::pow(bp.measure, 1 / q);
    EXPECT_NEAR(b.tail, c * m.M / std::pow(gamma, bp.p - 1), 1e-12 * (1 + b.tail));
    EXPECT_NEAR(b.psi,
                2 * bp.r * std::pow(bp.measure, 2 / q) *
                    std::min(*m.lipschitz * bp.partition_delta, 2 * m.M),
                1e-12 * (1 + b.psi));
    EXPECT_NEAR(b.phi, m.M * std::pow(bp.measure, 1 + 1 / q) * bp.magnitude_delta,
                1e-12 * (1 + b.phi));
  }
}

TEST(ErrorBound, Monotonicity) {
  const KernelMetrics m = certified_metrics(scalar(gaussian_kernel(unit_box(1), 8.0)));
  const BoundParameters base{2.5, 1.0, 1.0, 0.1, 1.0, 0.2, 0.1, 0.5};
  const BoundBreakdown b0 = error_bound(base, m);
  double previous = b0.tail;
  for (double g = 1.5; g < 100.0; g *= 1.5) {
    auto bp = base;
    bp.gamma = g;
    const double tail = error_bound(bp, m).tail;
    EXPECT_LT(tail, previous);
    previous = tail;
  }
  auto bigger = [&](auto edit) {
    auto bp = base;
    edit(bp);
    return error_bound(bp, m).total;
  };
  EXPECT_GE(bigger([](auto& b) { b.partition_delta *= 2; }), b0.total);
  EXPECT_GE(bigger([](auto& b) { b.magnitude_delta *= 2; }), b0.total);
  EXPECT_GE(bigger([](auto& b) { b.sigma *= 2; }), b0.total);
  EXPECT_GE(bigger([](auto& b) { b.lambda *= 2; }), b0.total);
}

TEST(ErrorBound, RejectsBadParameters) {
  const KernelMetrics m = unit_constant();
  const BoundParameters ok{2.0, 1.0, 1.0, 0.0, 2.0, 1.0, 0.1, 0.1};
  auto bad = [&](auto edit) {
    auto bp = ok;
    edit(bp);
    return bp;
  };
  EXPECT_THROW(error_bound(bad([](auto& b) { b.p = 1.0; }), m), InvalidArgument);
  EXPECT_THROW(error_bound(bad([](auto& b) { b.gamma = 0.0; }), m), InvalidArgument);
  EXPECT_THROW(error_bound(bad([](auto& b) { b.magnitude_delta = 3.0; }), m), InvalidArgument);
  EXPECT_THROW(error_bound(bad([](auto& b) { b.sigma = 2.5; }), m), InvalidArgument);
  EXPECT_THROW(error_bound(bad([](auto& b) { b.lambda = -1.0; }), m), InvalidArgument);
  EXPECT_THROW(error_bound(bad([](auto& b) { b.partition_delta = 0.0; }), m), InvalidArgument);
}

TEST(ErrorBound, StrictModeNeedsTabulatedOmega) {
  KernelMetrics m;
  m.M = 1.0;
  m.provenance = MetricsProvenance::estimated;
  m.omega_table = {{0.5, 0.2}};
  const BoundParameters bp{2.0, 1.0, 1.0, 0.0, 2.0, 1.0, 0.1, 0.1};
  const BoundBreakdown loose = error_bound(bp, m);
  EXPECT_TRUE(loose.omega_extrapolated);
  EXPECT_EQ(loose.omega, 2.0);
  EXPECT_EQ(loose.provenance, MetricsProvenance::estimated);
  EXPECT_THROW(error_bound(bp, m, true), RefineOmega);
}

TEST(SelectParameters, WorkedExample) {
  const Domain dom = unit_box(1);
  const KernelMetrics m = certified_metrics(scalar(gaussian_kernel(dom, 2.0)));
  ASSERT_DOUBLE_EQ(m.M, 1.0);
  const ParameterSelection s = select_parameters(1.0, 2.0, 1.0, 1.0, dom.diameter(), m);
  EXPECT_DOUBLE_EQ(s.lambda, 0.2);
  EXPECT_NEAR(s.gamma_star, 10.0, 1e-12);
  EXPECT_NEAR(s.delta_star, 0.2, 1e-15);
  EXPECT_NEAR(s.sigma_star, 0.02, 1e-15);
  EXPECT_LE(m.omega(s.partition_delta_star).value, 0.1);
  EXPECT_EQ(s.magnitude_intervals, 50u);
  EXPECT_LE(s.magnitude_delta, s.delta_star);
  EXPECT_LE(s.achieved.total, 1.0 + 1e-12);
  EXPECT_FALSE(s.zero_kernel);
}

TEST(SelectParameters, ZeroKernelShortcut) {
  const KernelMetrics m = certified_metrics(zero_kernel(1, 1));
  for (double eps : {1.0, 0.1}) {
    const ParameterSelection s = select_parameters(eps, 2.0, 1.0, 1.0, 1.0, m);
    EXPECT_TRUE(s.zero_kernel);
    EXPECT_DOUBLE_EQ(s.achieved.total, eps / 5.0);
  }
}

TEST(SelectParameters, Homogeneity) {
  const Domain dom = unit_box(2);
  const KernelMetrics m = certified_metrics(scalar(separable_kernel(dom, 0.2, 1.0)));
  const auto a = select_parameters(0.8, 2.0, 1.0, dom.measure(), dom.diameter(), m);
  const auto b = select_parameters(0.4, 2.0, 1.0, dom.measure(), dom.diameter(), m);
  EXPECT_NEAR(b.gamma_star, 2.0 * a.gamma_star, 1e-12 * b.gamma_star);
  EXPECT_NEAR(b.delta_star, a.delta_star / 2.0, 1e-15);
  EXPECT_NEAR(b.sigma_star, a.sigma_star / 4.0, 1e-15);
}

TEST(SelectParameters, ClosureAcrossConfigs) {
  int skipped = 0;
  for (int k = 1; k <= 3; ++k) {
    const Domain dom(Point::Zero(k), Point::Constant(k, 1.5));
    for (const auto& kern : {scalar(gaussian_kernel(dom, 1.0)), scalar(dot_kernel(dom)),
                             scalar(separable_kernel(dom, -0.3, 4.0))}) {
      const KernelMetrics m = certified_metrics(kern);
      for (double p : {1.5, 2.0, 3.0}) {
        for (double eps : {2.0, 0.5, 0.05}) {
          ParameterSelection s;
          try {
            s = select_parameters(eps, p, 0.8, dom.measure(), dom.diameter(), m);
          } catch (const InvalidArgument& e) {
            // gamma* / delta* blows past 2^32 intervals only at small eps, small p.
            EXPECT_TRUE(eps < 0.1 && p < 2.0) << k << " " << p << " " << eps << ": " << e.what();
            ++skipped;
            continue;
          }
          const BoundBreakdown again = error_bound(
              {p, 0.8, dom.measure(), s.lambda, s.gamma_star, s.partition_delta_star,
               s.magnitude_delta, s.sigma},
              m);
          EXPECT_LE(again.total, eps + 1e-12) << k << " " << p << " " << eps;
          EXPECT_EQ(again.total, s.achieved.total);
          EXPECT_LE(s.achieved.psi, eps / 5.0 + 1e-15);
        }
      }
    }
  }
  EXPECT_LT(skipped, 10);
}

TEST(SelectParameters, EstimatedNeedsFineEnoughTable) {
  KernelMetrics m;
  m.M = 1.0;
  m.provenance = MetricsProvenance::estimated;
  m.omega_table = {{0.25, 0.3}, {0.5, 0.6}, {1.0, 1.0}};
  EXPECT_THROW(select_parameters(1.0, 2.0, 1.0, 1.0, 1.0, m), RefineOmega);
  m.omega_table.insert(m.omega_table.begin(), {0.125, 0.09});
  const auto s = select_parameters(1.0, 2.0, 1.0, 1.0, 1.0, m);
  EXPECT_DOUBLE_EQ(s.partition_delta_star, 0.125);
}

TEST(SelectParameters, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(select_parameters(0.0, 2.0, 1.0, 1.0, 1.0, unit_constant()), InvalidArgument);
}

TEST(OptimizeSplit, MeetsTargetWithCoarserNet) {
  const Domain dom = unit_box(1);
  const KernelMetrics m = certified_metrics(scalar(gaussian_kernel(dom, 2.0)));
  for (double p : {1.5, 2.0, 4.0}) {
    const auto split = optimize_split(0.5, p, 1.0, 1.0, dom.diameter(), m);
    EXPECT_LE(split.optimized.achieved.total, 0.5 + 1e-12);
    EXPECT_LE(split.even_split.achieved.total, 0.5 + 1e-12);
    EXPECT_GE(split.optimized.sigma, split.even_split.sigma);
  }
}

}  // namespace
}  // namespace hsnet
