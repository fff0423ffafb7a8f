#include "hsnet/budget.hpp"
#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/input_family.hpp"
#include "hsnet/sphere_net.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace hsnet {
namespace {

Partition cells(int n) {
  return quadrature_grid(unit_box(1), (1.0 / n) * (1.0 + 1e-9), 2);
}

TEST(MagnitudeGrid, Examples) {
  const MagnitudeGrid g = build_magnitude_grid(1.0, 4);
  EXPECT_EQ(g.values(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_DOUBLE_EQ(g.step(), 0.25);

  const MagnitudeGrid two = build_magnitude_grid(2.0, 1);
  EXPECT_EQ(two.values(), (std::vector<double>{0.0, 2.0}));
  EXPECT_DOUBLE_EQ(two.step(), 2.0);

  const MagnitudeGrid half = build_magnitude_grid(0.5, 5);
  EXPECT_DOUBLE_EQ(half.step(), 0.1);
  EXPECT_NEAR(half.value(3), 0.3, 1e-16);
  EXPECT_EQ(half.value(0), 0.0);
  EXPECT_EQ(half.value(5), 0.5);
}

TEST(MagnitudeGrid, RejectsBadArguments) {
  EXPECT_THROW(build_magnitude_grid(0.0, 3), InvalidArgument);
  EXPECT_THROW(build_magnitude_grid(1.0, 0), InvalidArgument);
}

TEST(MagnitudeGrid, FloorIndex) {
  const MagnitudeGrid g = build_magnitude_grid(1.0, 4);
  EXPECT_EQ(g.floor_index(0.0), 0u);
  EXPECT_EQ(g.floor_index(0.6), 2u);
  EXPECT_EQ(g.floor_index(0.75), 3u);
  EXPECT_EQ(g.floor_index(1.0), 4u);
  EXPECT_EQ(g.floor_index(7.0), 4u);
}

TEST(CountFamily, SingleCellFiveMembers) {
  const Partition part = cells(1);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 2);
  const DirectionNet net = build_sigma_net(1, 0.5);
  EXPECT_EQ(count_family(part, grid, net, 2.0, 1.0), 5);
  const auto family = enumerate_family(part, grid, net, 2.0, 1.0);
  ASSERT_EQ(family.size(), 5u);
  EXPECT_EQ(family.front(), NetMember::zero(1));
}

TEST(CountFamily, EmptyBudgetLeavesZero) {
  const Partition part = cells(3);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 4);
  const DirectionNet net = build_sigma_net(2, 0.5);
  // r^p = 1e-6 < mu z_1^p = (1/3)(1/16).
  EXPECT_EQ(count_family(part, grid, net, 2.0, 1e-3), 1);
  EXPECT_EQ(enumerate_family(part, grid, net, 2.0, 1e-3).size(), 1u);
}

TEST(CountFamily, TwoCellsNineMembers) {
  const Partition part = cells(2);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 1);
  const DirectionNet net = build_sigma_net(1, 0.5);
  // p = 1 is outside the operator's range but the budget itself is defined.
  const Budget budget(part, grid, 1.0, 1.0);
  EXPECT_EQ(count_family(budget, net.size()), 9);
  const auto family = enumerate_family(budget, net.size());
  ASSERT_EQ(family.size(), 9u);
  for (const auto& m : family) EXPECT_TRUE(budget.feasible(m.magnitude));
}

TEST(CountFamily, MatchesBruteForceOracle) {
  using testing::ratio;
  for (int n = 1; n <= 3; ++n) {
    for (int a = 1; a <= 4; ++a) {
      for (int c = 1; c <= 4; ++c) {
        for (int p : {2, 3}) {
          const testing::CountCase cs{n, a, c, ratio(3, 2), ratio(9, 10)};
          const Partition part = cells(n);
          const Budget budget(part, build_magnitude_grid(1.5, static_cast<std::uint32_t>(a)),
                              p, 0.9);
          EXPECT_EQ(budget.arithmetic(), BudgetArithmetic::exact_integer);
          const BigInt expected = testing::brute_force_count(cs, p);
          EXPECT_EQ(count_family(budget, static_cast<std::size_t>(c)), expected)
              << n << " " << a << " " << c << " " << p;
          EXPECT_EQ(enumerate_family(budget, static_cast<std::size_t>(c)).size(),
                    expected.convert_to<std::size_t>());
        }
      }
    }
  }
}

TEST(EnumerateFamily, LexicographicUniqueAndFeasible) {
  const Partition part = cells(3);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 3);
  const DirectionNet net = build_sigma_net(2, 1.0);
  const Budget budget(part, grid, 2.5, 0.8);
  EXPECT_EQ(budget.arithmetic(), BudgetArithmetic::floating);
  const auto family = enumerate_family(budget, net.size());
  // Order key interleaves each cell's (magnitude, direction).
  auto key = [](const NetMember& m) {
    std::vector<std::uint32_t> k;
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      k.push_back(m.magnitude[i]);
      k.push_back(m.direction[i]);
    }
    return k;
  };
  EXPECT_TRUE(std::is_sorted(family.begin(), family.end(),
                             [&](const auto& x, const auto& y) { return key(x) < key(y); }));
  EXPECT_EQ(std::set<NetMember>(family.begin(), family.end()).size(), family.size());
  for (const auto& m : family) {
    EXPECT_TRUE(budget.feasible(m.magnitude));
    EXPECT_LE(budget.usage(m.magnitude), std::pow(0.8, 2.5) * (1 + 1e-12));
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      if (m.magnitude[i] == 0) EXPECT_EQ(m.direction[i], 0u);
      EXPECT_LT(m.direction[i], net.size());
    }
  }
  EXPECT_EQ(count_family(budget, net.size()), family.size());
}

TEST(EnumerateFamily, CapRaisesFamilyTooLarge) {
  const Partition part = cells(3);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 4);
  const Budget budget(part, grid, 2.0, 1.0);
  try {
    enumerate_family(budget, 4, 10);
    FAIL() << "expected family-too-large";
  } catch (const FamilyTooLarge& e) {
    EXPECT_EQ(e.cap(), 10u);
    EXPECT_EQ(e.count(), count_family(budget, 4).str());
  }
}

TEST(SampleFamily, MembersComeFromTheEnumeration) {
  const Partition part = cells(1);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 2);
  const DirectionNet net = build_sigma_net(1, 0.5);
  const auto family = enumerate_family(part, grid, net, 2.0, 1.0);
  const std::set<NetMember> all(family.begin(), family.end());
  const auto draws = sample_family(part, grid, net, 2.0, 1.0, 100, 42);
  ASSERT_EQ(draws.size(), 100u);
  for (const auto& m : draws) EXPECT_TRUE(all.count(m));
  EXPECT_TRUE(sample_family(part, grid, net, 2.0, 1.0, 0, 42).empty());
}

TEST(SampleFamily, DeterministicAndFeasible) {
  const Partition part = cells(3);
  const MagnitudeGrid grid = build_magnitude_grid(2.0, 4);
  const DirectionNet net = build_sigma_net(2, 0.5);
  const Budget budget(part, grid, 1.5, 1.2);
  const auto a = sample_family(budget, net.size(), 500, 9);
  const auto b = sample_family(budget, net.size(), 500, 9);
  EXPECT_EQ(a, b);
  for (const auto& m : a) EXPECT_TRUE(budget.feasible(m.magnitude));
  EXPECT_NE(a, sample_family(budget, net.size(), 500, 10));
}

// Magnitude profiles should be hit uniformly; a chi-square check over the
// feasible profiles of a small config with a generous threshold.
TEST(SampleFamily, ProfilesAreUniform) {
  const Partition part = cells(2);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 3);
  const Budget budget(part, grid, 2.0, 0.8);
  const FamilyTable table(budget, 1);
  const auto profiles = table.profile_count().convert_to<std::size_t>();
  ASSERT_GT(profiles, 3u);
  const std::size_t draws = 20000;
  const auto sample = sample_family(budget, 1, draws, 5);
  std::map<std::vector<std::uint32_t>, std::size_t> hits;
  for (const auto& m : sample) ++hits[m.magnitude];
  EXPECT_EQ(hits.size(), profiles);
  const double expected = static_cast<double>(draws) / static_cast<double>(profiles);
  double chi2 = 0.0;
  for (const auto& [k, v] : hits) chi2 += (v - expected) * (v - expected) / expected;
  EXPECT_LT(chi2, 3.0 * static_cast<double>(profiles) + 30.0);
}

TEST(Budget, ExactModeDecidesTiesExactly) {
  // Two cells of measure 1/2 at magnitude 1 and r = 1: the sum hits r^p.
  const Partition part = cells(2);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 1);
  const Budget exact(part, grid, 2.0, 1.0);
  EXPECT_EQ(exact.arithmetic(), BudgetArithmetic::exact_integer);
  const std::vector<std::uint32_t> full{1, 1};
  EXPECT_TRUE(exact.feasible(full));
  const Budget tight(part, grid, 2.0, 1.0 - 1e-12);
  EXPECT_FALSE(tight.feasible(full));
}

TEST(Budget, FloatingModeReportsSlack) {
  const Partition part = cells(2);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 1);
  const Budget b(part, grid, 1.5, 1.0);
  EXPECT_EQ(b.arithmetic(), BudgetArithmetic::floating);
  EXPECT_EQ(b.slack(), 1e-12);
}

TEST(FamilyTable, StateCapRaisesBudgetIntractable) {
  const Partition part = cells(3);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, 4);
  const Budget budget(part, grid, 1.5, 0.8);
  EXPECT_THROW(FamilyTable(budget, 2, FamilyDpOptions{2}), BudgetIntractable);
}

}  // namespace
}  // namespace hsnet
