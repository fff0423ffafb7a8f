#pragma once

#include "hsnet/functions.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hsnet {

class Partition;

enum class Smoothness { rough, smooth, mixed };

std::string_view to_string(Smoothness s);
//! Parses "rough", "smooth" or "mixed"; throws InvalidArgument otherwise.
Smoothness parse_smoothness(std::string_view s);

struct BallSampleOptions {
  Smoothness smoothness = Smoothness::rough;
  //! Share of draws rescaled to norm exactly r; the rest get r * U(0, 1).
  double boundary_fraction = 0.5;
  //! Scale of the smooth mode; zero yields the zero function.
  double amplitude = 1.0;
  //! Rough mode: random sub-box bumps added to a constant base.
  int max_pieces = 6;
  //! Smooth mode: largest cosine frequency per axis.
  int max_frequency = 3;
};

/*!
  Random elements of the closed L_p ball of radius r, sampled at the
  partition's quadrature nodes with values in R^n.

  Rough draws are a constant plus up to max_pieces sub-box bumps with
  log-normal heights, so they spike above any fixed level on small sets.
  Smooth draws are short sums of cosines. Draw i depends only on (seed, i).
*/
std::vector<SampledFn> sample_ball(const Partition& partition, int n, double p,
                                   double r, std::size_t count,
                                   std::uint64_t seed,
                                   const BallSampleOptions& options = {});

}  // namespace hsnet
