#include "hsnet/sphere_net.hpp"

#include "hsnet/error.hpp"
#include "hsnet/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hsnet {

std::string_view to_string(NetConstruction c) {
  switch (c) {
    case NetConstruction::exact_1d:
      return "exact-1d";
    case NetConstruction::angular_2d:
      return "angular-2d";
    case NetConstruction::greedy_cover:
      return "greedy-cover";
    case NetConstruction::explicit_points:
      return "explicit";
  }
  return "unknown";
}

DirectionNet::DirectionNet(int dim, double sigma, NetConstruction c,
                           std::vector<Eigen::VectorXd> points)
    : dim_(dim), sigma_(sigma), construction_(c), points_(std::move(points)) {}

DirectionNet DirectionNet::from_points(std::vector<Eigen::VectorXd> points,
                                       double sigma) {
  if (points.empty()) throw InvalidArgument("direction net needs a point");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const auto dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidArgument("net points differ in dimension");
    if (std::abs(p.norm() - 1.0) > 1e-12) {
      throw InvalidArgument("net points must be unit vectors");
    }
  }
  return DirectionNet(static_cast<int>(dim), sigma,
                      NetConstruction::explicit_points, std::move(points));
}

std::size_t DirectionNet::nearest(const Eigen::VectorXd& u) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d2 = (points_[i] - u).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

double DirectionNet::distance_to_net(const Eigen::VectorXd& u) const {
  return (points_[nearest(u)] - u).norm();
}

namespace {

// Spherical Fibonacci lattice on S^2.
std::vector<Eigen::VectorXd> fibonacci_pool(std::size_t count) {
  std::vector<Eigen::VectorXd> pool;
  pool.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    Eigen::VectorXd v(3);
    v << rho * std::cos(phi), rho * std::sin(phi), z;
    pool.push_back(v / v.norm());
  }
  return pool;
}

std::vector<Eigen::VectorXd> gaussian_pool(int n, std::size_t count,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pool.push_back(random_unit_vector(n, rng));
  return pool;
}

}  // namespace

std::size_t required_pool_size(int n, double sigma,
                               const SphereNetOptions& options) {
  if (n < 3) return 0;
  // The pool's own covering radius must stay below margin * sigma so that the
  // pool certificate transfers to the sphere. Random pools pay a log factor.
  const double c = n == 3 ? 2.0 : 8.0;
  const double spacing = 2.0 / (options.margin * sigma);
  const double want = c * std::pow(spacing, n - 1);
  if (!std::isfinite(want) || want > 1e15) {
    return std::numeric_limits<std::size_t>::max();
  }
  return std::max(options.min_pool, static_cast<std::size_t>(std::ceil(want)));
}

DirectionNet build_sigma_net(int n, double sigma,
                             const SphereNetOptions& options) {
  if (n < 1) throw InvalidArgument("sphere dimension must be >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (sigma > 2.0) {
    throw InvalidArgument("sigma must not exceed the sphere diameter 2");
  }

  if (n == 1) {
    std::vector<Eigen::VectorXd> pts{Eigen::VectorXd::Constant(1, 1.0),
                                     Eigen::VectorXd::Constant(1, -1.0)};
    return DirectionNet(1, sigma, NetConstruction::exact_1d, std::move(pts));
  }

  if (n == 2) {
    const double half_angle = std::asin(std::min(sigma, 2.0) / 2.0);
    auto count = static_cast<std::size_t>(
        std::ceil(std::numbers::pi / half_angle - 1e-9));
    count = std::max<std::size_t>(count, 2);
    while (2.0 * std::sin(std::numbers::pi / (2.0 * count)) > sigma) ++count;
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      Eigen::VectorXd v(2);
      v << std::cos(t), std::sin(t);
      pts.push_back(v);
    }
    return DirectionNet(2, sigma, NetConstruction::angular_2d, std::move(pts));
  }

  if (sigma >= 2.0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[0] = 1.0;
    return DirectionNet(n, sigma, NetConstruction::greedy_cover, {e});
  }

  const std::size_t pool_size = required_pool_size(n, sigma, options);
  if (pool_size > options.max_pool) {
    throw CoverageUnverifiable(n, sigma, pool_size, options.max_pool);
  }
  const auto pool = n == 3 ? fibonacci_pool(pool_size)
                           : gaussian_pool(n, pool_size, options.seed);

  const double target = sigma * (1.0 - options.margin);
  std::vector<double> gap(pool.size());
  std::vector<Eigen::VectorXd> net;
  std::size_t next = 0;
  std::fill(gap.begin(), gap.end(), std::numeric_limits<double>::infinity());
  for (;;) {
    net.push_back(pool[next]);
    const auto& added = net.back();
    double worst = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      gap[i] = std::min(gap[i], (pool[i] - added).norm());
      if (gap[i] > worst) {
        worst = gap[i];
        next = i;
      }
    }
    if (worst <= target) break;
  }
  return DirectionNet(n, sigma, NetConstruction::greedy_cover, std::move(net));
}

double verify_covering(const DirectionNet& net, std::size_t samples,
                       std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto u = random_unit_vector(net.dim(), rng);
    worst = std::max(worst, net.distance_to_net(u));
  }
  return worst;
}

}  // namespace hsnet
