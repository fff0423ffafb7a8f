#include "hsnet/error.hpp"
#include "hsnet/norms.hpp"
#include "hsnet/operator.hpp"
#include "hsnet/sphere_net.hpp"
#include "hsnet/verify.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

namespace hsnet {
namespace {

Kernel scalar(const ScalarKernel& k) {
  return make_block_kernel(1, 1, {{k, Eigen::MatrixXd::Ones(1, 1)}});
}

SampledFn constant(const Partition& part, double c) {
  SampledFn f = SampledFn::zero(1, part.node_count());
  f.values.setConstant(c);
  return f;
}

TEST(Distance, Examples) {
  const Partition part = quadrature_grid(unit_box(1), 0.5, 2);
  const std::vector<SampledFn> one{constant(part, 1.0)};
  const std::vector<SampledFn> half{constant(part, 0.5)};
  const std::vector<SampledFn> zero{constant(part, 0.0)};
  const std::vector<SampledFn> both{constant(part, 0.0), constant(part, 1.0)};
  EXPECT_NEAR(directed_distance(one, half, part, 2.0), 0.5, 1e-15);
  EXPECT_EQ(directed_distance(zero, zero, part, 2.0), 0.0);
  EXPECT_EQ(directed_distance(one, both, part, 2.0), 0.0);
  EXPECT_EQ(hausdorff_distance(both, both, part, 2.0), 0.0);
  EXPECT_NEAR(hausdorff_distance(zero, both, part, 2.0), 1.0, 1e-15);
  EXPECT_EQ(hausdorff_distance(zero, both, part, 2.0),
            hausdorff_distance(both, zero, part, 2.0));
  EXPECT_THROW(directed_distance(one, {}, part, 2.0), InvalidArgument);
  EXPECT_THROW(hausdorff_distance({}, one, part, 2.0), InvalidArgument);
}

// Pruned scan against the plain double loop.
TEST(Distance, MatchesBruteForce) {
  const Partition part = quadrature_grid(unit_box(2), 0.5, 2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_set = [&](std::size_t count) {
    std::vector<SampledFn> out(count);
    for (auto& f : out) {
      f.values = Eigen::MatrixXd::NullaryExpr(
          2, static_cast<Eigen::Index>(part.node_count()), [&] { return g(rng); });
    }
    return out;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_set(60);
    const auto v = random_set(80);
    for (double q : {1.5, 2.0, 3.0}) {
      double expected = 0.0;
      for (const auto& a : u) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : v) best = std::min(best, lp_distance(a, b, part, q));
        expected = std::max(expected, best);
      }
      EXPECT_NEAR(directed_distance(u, v, part, q), expected, 1e-12 * expected);
      EXPECT_EQ(hausdorff_distance(u, v, part, q), hausdorff_distance(v, u, part, q));
    }
  }
}

struct Testbed {
  Domain domain = unit_box(1);
  Kernel kernel;
  KernelMetrics metrics;
  Partition input;
  Partition output;
  DiscreteOperator op;

  Testbed(Kernel k, double delta, int order)
      : kernel(std::move(k)),
        metrics(certified_metrics(kernel)),
        input(quadrature_grid(domain, delta, order)),
        output(quadrature_grid(domain, 0.25, 3)),
        op(kernel, input, output) {}
};

TEST(VerifySteps, ZeroKernel) {
  const Testbed t(zero_kernel(1, 1), 0.25, 3);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 4);
  const DirectionNet net = build_sigma_net(1, 1.0);
  VerifyOptions o;
  o.samples = 100;
  const StepsReport r = verify_steps(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_TRUE(r.pass);
  for (const auto& s : r.steps) {
    EXPECT_EQ(s.observed, 0.0);
    EXPECT_EQ(s.bound, 0.0);
  }
}

TEST(VerifySteps, ConstantKernelClipBound) {
  const Testbed t(scalar(constant_kernel(1.0)), 0.1, 3);
  const MagnitudeGrid grid = build_magnitude_grid(2.0, 40);
  const DirectionNet net = build_sigma_net(1, 0.1);
  VerifyOptions o;
  o.samples = 1000;
  const StepsReport r = verify_steps(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  ASSERT_EQ(r.steps.size(), 4u);
  EXPECT_EQ(r.steps[0].step, 2);
  EXPECT_DOUBLE_EQ(r.steps[0].bound, 1.0);
  EXPECT_GT(r.steps[0].observed, 0.0);
  EXPECT_DOUBLE_EQ(r.tchebyshev.bound, 0.25);
  EXPECT_TRUE(r.pass);
}

TEST(VerifySteps, SmoothInputsBelowGammaAreNotClipped) {
  const Testbed t(scalar(gaussian_kernel(unit_box(1), 3.0)), 0.2, 3);
  const MagnitudeGrid grid = build_magnitude_grid(50.0, 200);
  const DirectionNet net = build_sigma_net(1, 1.0);
  VerifyOptions o;
  o.samples = 200;
  o.ball.smoothness = Smoothness::smooth;
  const StepsReport r = verify_steps(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_EQ(r.steps[0].observed, 0.0);
  EXPECT_EQ(r.tchebyshev.observed, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(VerifyCoverage, ConstantKernelBothFamilyModes) {
  const Testbed t(scalar(constant_kernel(1.0)), 1.0, 3);
  const MagnitudeGrid grid = build_magnitude_grid(2.0, 40);
  const DirectionNet net = build_sigma_net(1, 0.1);
  CoverageOptions o;
  o.verify.samples = 500;
  const CoverageReport e = verify_coverage(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_EQ(e.family_count, "41");
  EXPECT_EQ(e.family_images, 41u);
  EXPECT_TRUE(e.pass);
  EXPECT_LE(e.observed, e.projected);
  EXPECT_LE(e.observed, 0.025 + 1e-12);
  EXPECT_EQ(e.max_so_far.back().samples, 500u);
  EXPECT_EQ(e.max_so_far.back().distance, e.observed);

  o.family_mode = FamilyMode::sample;
  o.family_samples = 30;
  const CoverageReport s = verify_coverage(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_EQ(s.family_count, "41");
  EXPECT_EQ(s.family_images, 530u);
  EXPECT_TRUE(s.pass);
  EXPECT_GE(s.observed, e.observed);
}

TEST(VerifyCoverage, ForcedFailureAndDeterminism) {
  const Testbed t(scalar(gaussian_kernel(unit_box(1), 4.0)), 0.25, 3);
  const MagnitudeGrid grid = build_magnitude_grid(1.5, 6);
  const DirectionNet net = build_sigma_net(1, 1.0);
  CoverageOptions o;
  o.verify.samples = 200;
  const VerificationReport a = verify_all(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  const VerificationReport b = verify_all(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.coverage.observed, b.coverage.observed);
  EXPECT_EQ(a.coverage.reverse, b.coverage.reverse);
  for (std::size_t i = 0; i < a.steps.steps.size(); ++i) {
    EXPECT_EQ(a.steps.steps[i].observed, b.steps.steps[i].observed);
  }
  o.verify.bound_scale = 0.01;
  EXPECT_FALSE(verify_all(t.op, t.metrics, grid, net, 2.0, 1.0, o).pass);
}

TEST(VerifyCoverage, ZeroKernel) {
  const Testbed t(zero_kernel(1, 1), 0.5, 2);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 2);
  const DirectionNet net = build_sigma_net(1, 1.0);
  CoverageOptions o;
  o.verify.samples = 50;
  const CoverageReport r = verify_coverage(t.op, t.metrics, grid, net, 2.0, 1.0, o);
  EXPECT_EQ(r.observed, 0.0);
  EXPECT_EQ(r.bound.total, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(FamilyMode, Parse) {
  EXPECT_EQ(parse_family_mode("sample"), FamilyMode::sample);
  EXPECT_EQ(to_string(FamilyMode::enumerate), "enumerate");
  EXPECT_THROW(parse_family_mode("all"), InvalidArgument);
}

}  // namespace
}  // namespace hsnet
