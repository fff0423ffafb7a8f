#include "hsnet/ball_sampler.hpp"

#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/norms.hpp"
#include "hsnet/parallel.hpp"
#include "hsnet/random.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hsnet {

std::string_view to_string(Smoothness s) {
  switch (s) {
    case Smoothness::rough: return "rough";
    case Smoothness::smooth: return "smooth";
    case Smoothness::mixed: return "mixed";
  }
  return "rough";
}

Smoothness parse_smoothness(std::string_view s) {
  if (s == "rough") return Smoothness::rough;
  if (s == "smooth") return Smoothness::smooth;
  if (s == "mixed") return Smoothness::mixed;
  throw InvalidArgument("unknown smoothness '" + std::string(s) + "'");
}

namespace {

Eigen::VectorXd gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

SampledFn rough_draw(const Partition& partition, int n, int max_pieces,
                     Rng& rng) {
  const auto& domain = partition.domain();
  const int k = domain.dim();
  const auto nodes = partition.nodes();
  SampledFn x = SampledFn::zero(n, nodes.size());
  const Eigen::VectorXd base = gaussian_vector(n, rng);
  x.values.colwise() = base;

  std::uniform_int_distribution<int> piece_count(0, std::max(max_pieces, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::lognormal_distribution<double> height(0.0, 1.5);
  const int pieces = piece_count(rng);
  for (int b = 0; b < pieces; ++b) {
    Eigen::VectorXd lo(k), hi(k);
    for (int a = 0; a < k; ++a) {
      const double len = domain.upper()[a] - domain.lower()[a];
      // Widths spread over several decades so some bumps are narrow spikes.
      const double width = len * std::pow(10.0, -2.0 * unit(rng));
      const double start = domain.lower()[a] + (len - width) * unit(rng);
      lo[a] = start;
      hi[a] = start + width;
    }
    const Eigen::VectorXd value = height(rng) * random_unit_vector(n, rng);
    for (std::size_t w = 0; w < nodes.size(); ++w) {
      const auto& s = nodes[w].point;
      if ((s.array() >= lo.array()).all() && (s.array() <= hi.array()).all()) {
        x.values.col(static_cast<Eigen::Index>(w)) += value;
      }
    }
  }
  return x;
}

SampledFn smooth_draw(const Partition& partition, int n, double amplitude,
                      int max_frequency, Rng& rng) {
  const auto& domain = partition.domain();
  const int k = domain.dim();
  const auto nodes = partition.nodes();
  SampledFn x = SampledFn::zero(n, nodes.size());
  if (amplitude == 0.0) return x;

  std::uniform_int_distribution<int> freq(0, std::max(max_frequency, 0));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  constexpr int kTerms = 4;
  for (int t = 0; t < kTerms; ++t) {
    Eigen::VectorXd f(k);
    for (int a = 0; a < k; ++a) {
      f[a] = 2.0 * std::numbers::pi * freq(rng) /
             (domain.upper()[a] - domain.lower()[a]);
    }
    const double ph = phase(rng);
    const Eigen::VectorXd coeff = amplitude * gaussian_vector(n, rng);
    for (std::size_t w = 0; w < nodes.size(); ++w) {
      const double arg = f.dot(nodes[w].point - domain.lower()) + ph;
      x.values.col(static_cast<Eigen::Index>(w)) += std::cos(arg) * coeff;
    }
  }
  return x;
}

}  // namespace

std::vector<SampledFn> sample_ball(const Partition& partition, int n, double p,
                                   double r, std::size_t count,
                                   std::uint64_t seed,
                                   const BallSampleOptions& options) {
  if (n < 1) throw InvalidArgument("input dimension must be positive");
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  if (!partition.has_quadrature()) {
    throw InvalidArgument("sample_ball needs a partition with quadrature");
  }
  if (options.boundary_fraction < 0.0 || options.boundary_fraction > 1.0) {
    throw InvalidArgument("boundary_fraction must lie in [0, 1]");
  }

  std::vector<SampledFn> out(count);
  parallel_for(count, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32)};
    Rng rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Smoothness mode = options.smoothness;
    if (mode == Smoothness::mixed) {
      mode = unit(rng) < 0.5 ? Smoothness::rough : Smoothness::smooth;
    }
    SampledFn x = mode == Smoothness::rough
                      ? rough_draw(partition, n, options.max_pieces, rng)
                      : smooth_draw(partition, n, options.amplitude,
                                    options.max_frequency, rng);

    const double target =
        unit(rng) < options.boundary_fraction ? r : r * unit(rng);
    const double norm = lp_norm(x, partition, p);
    if (norm > 0.0) {
      x.values *= target / norm;
      // Guard against the rescaled norm landing one ulp above r.
      const double again = lp_norm(x, partition, p);
      if (again > r) x.values *= r / again;
    }
    out[i] = std::move(x);
  });
  return out;
}

}  // namespace hsnet
