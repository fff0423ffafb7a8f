#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hsnet {

enum class NetConstruction { exact_1d, angular_2d, greedy_cover, explicit_points };

std::string_view to_string(NetConstruction c);

struct SphereNetOptions {
  //! Greedy cover stops once every pool point is within sigma * (1 - margin).
  double margin = 0.05;
  std::size_t min_pool = 512;
  std::size_t max_pool = std::size_t{1} << 21;
  std::uint64_t seed = 0x5eedf00dULL;
};

class DirectionNet;

/*!
  Builds a sigma-net on the unit sphere of R^n.

  n = 1 gives {+1, -1}. n = 2 gives ceil(pi / asin(sigma / 2)) equally spaced
  angles. n >= 3 runs a greedy farthest-point cover over a quasi-uniform
  candidate pool; sigma = 2 needs a single point in every dimension.
*/
DirectionNet build_sigma_net(int n, double sigma,
                             const SphereNetOptions& options = {});

/*!
  Finite sigma-net on the unit sphere of R^n.

  Distances are Euclidean chords. Every point is unit-norm within 1e-12.
*/
class DirectionNet {
 public:
  //! Wraps explicit unit vectors; used for custom nets and tests.
  static DirectionNet from_points(std::vector<Eigen::VectorXd> points,
                                  double sigma);

  int dim() const noexcept { return dim_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return points_.size(); }
  NetConstruction construction() const noexcept { return construction_; }
  const Eigen::VectorXd& point(std::size_t i) const { return points_.at(i); }
  std::span<const Eigen::VectorXd> points() const noexcept { return points_; }

  //! Index of the closest net point to u; ties go to the lowest index.
  std::size_t nearest(const Eigen::VectorXd& u) const;
  double distance_to_net(const Eigen::VectorXd& u) const;

 private:
  friend DirectionNet build_sigma_net(int, double, const SphereNetOptions&);

  DirectionNet(int dim, double sigma, NetConstruction c,
               std::vector<Eigen::VectorXd> points);

  int dim_;
  double sigma_;
  NetConstruction construction_;
  std::vector<Eigen::VectorXd> points_;
};

//! Candidate pool size the greedy cover needs for (n, sigma).
std::size_t required_pool_size(int n, double sigma,
                               const SphereNetOptions& options = {});

/*!
  Largest distance from `samples` seeded uniform unit vectors to the net.

  A statistical certificate for the covering property: a lower estimate of the
  true covering radius.
*/
double verify_covering(const DirectionNet& net, std::size_t samples,
                       std::uint64_t seed);

}  // namespace hsnet
