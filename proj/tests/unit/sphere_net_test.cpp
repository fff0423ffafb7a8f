#include "hsnet/error.hpp"
#include "hsnet/sphere_net.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

namespace hsnet {
namespace {

TEST(SphereNet, LineIsExact) {
  const DirectionNet net = build_sigma_net(1, 0.3);
  ASSERT_EQ(net.size(), 2u);
  EXPECT_EQ(net.point(0)[0], 1.0);
  EXPECT_EQ(net.point(1)[0], -1.0);
  EXPECT_EQ(net.construction(), NetConstruction::exact_1d);
  EXPECT_EQ(verify_covering(net, 1000, 3), 0.0);
}

TEST(SphereNet, CircleSixPoints) {
  const DirectionNet net = build_sigma_net(2, 1.0);
  ASSERT_EQ(net.size(), 6u);
  const double chord = 2.0 * std::sin(std::numbers::pi / 12.0);
  EXPECT_NEAR(chord, 0.5176380902, 1e-9);

  // Exhaustive angular scan as the reference for the covering radius.
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 10000.0;
    Eigen::VectorXd u(2);
    u << std::cos(t), std::sin(t);
    double best = 4.0;
    for (const auto& e : net.points()) best = std::min(best, (u - e).norm());
    worst = std::max(worst, best);
  }
  EXPECT_LE(worst, chord + 1e-9);
  EXPECT_GT(worst, chord - 1e-3);
  EXPECT_LE(verify_covering(net, 100000, 11), chord + 1e-9);
}

TEST(SphereNet, DiameterNeedsOnePoint) {
  const DirectionNet net = build_sigma_net(3, 2.0);
  ASSERT_EQ(net.size(), 1u);
  EXPECT_LE(verify_covering(net, 1000, 5), 2.0);
}

TEST(SphereNet, RejectsBadSigma) {
  EXPECT_THROW(build_sigma_net(2, 0.0), InvalidArgument);
  EXPECT_THROW(build_sigma_net(2, -0.5), InvalidArgument);
  EXPECT_THROW(build_sigma_net(3, 2.5), InvalidArgument);
  EXPECT_THROW(build_sigma_net(0, 1.0), InvalidArgument);
}

TEST(SphereNet, TinySigmaInHighDimensionIsUnverifiable) {
  try {
    build_sigma_net(6, 0.05);
    FAIL() << "expected coverage-unverifiable";
  } catch (const CoverageUnverifiable& e) {
    EXPECT_GT(e.required_pool(), SphereNetOptions{}.max_pool);
    EXPECT_NE(std::string(e.what()).find("coverage-unverifiable"), std::string::npos);
  }
}

struct NetCase {
  int n;
  double sigma;
};

class SphereNetCover : public ::testing::TestWithParam<NetCase> {};

TEST_P(SphereNetCover, CoversAndIsUnitNorm) {
  const auto [n, sigma] = GetParam();
  const DirectionNet net = build_sigma_net(n, sigma);
  EXPECT_EQ(net.dim(), n);
  for (const auto& e : net.points()) EXPECT_NEAR(e.norm(), 1.0, 1e-12);
  EXPECT_LE(verify_covering(net, 100000, 17), sigma);
}

INSTANTIATE_TEST_SUITE_P(
    Nets, SphereNetCover,
    ::testing::Values(NetCase{1, 0.1}, NetCase{2, 0.05}, NetCase{2, 0.7},
                      NetCase{2, 2.0}, NetCase{3, 1.0}, NetCase{3, 0.5},
                      NetCase{3, 0.3}, NetCase{4, 0.8}),
    [](const ::testing::TestParamInfo<NetCase>& info) {
      const auto milli = static_cast<int>(std::lround(info.param.sigma * 1000));
      return "n" + std::to_string(info.param.n) + "_sigma" + std::to_string(milli) + "e3";
    });

TEST(SphereNet, SizeNonIncreasingInSigma) {
  for (int n = 1; n <= 3; ++n) {
    std::size_t previous = 0;
    for (double sigma : {2.0, 1.5, 1.0, 0.7, 0.5}) {
      const std::size_t size = build_sigma_net(n, sigma).size();
      EXPECT_GE(size, previous) << "n=" << n << " sigma=" << sigma;
      previous = size;
    }
  }
}

TEST(SphereNet, NearestBreaksTiesLow) {
  Eigen::VectorXd a(2), b(2), u(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  const auto net = DirectionNet::from_points({a, b}, 2.0);
  u << std::sqrt(0.5), std::sqrt(0.5);
  EXPECT_EQ(net.nearest(u), 0u);
}

TEST(SphereNet, VerifyCoveringIsDeterministic) {
  const DirectionNet net = build_sigma_net(3, 0.6);
  EXPECT_EQ(verify_covering(net, 5000, 9), verify_covering(net, 5000, 9));
}

}  // namespace
}  // namespace hsnet
