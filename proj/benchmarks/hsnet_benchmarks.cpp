#include "hsnet/ball_sampler.hpp"
#include "hsnet/budget.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/input_family.hpp"
#include "hsnet/operator.hpp"
#include "hsnet/sphere_net.hpp"
#include "hsnet/verify.hpp"

#include <benchmark/benchmark.h>

using namespace hsnet;

namespace {

Kernel gaussian(const Domain& d) {
  return make_block_kernel(1, 1, {{gaussian_kernel(d, 3.0), Eigen::MatrixXd::Ones(1, 1)}});
}

void BM_CountFamily(benchmark::State& state) {
  const Partition part = build_partition(unit_box(1), 1.0 / static_cast<double>(state.range(0)));
  const MagnitudeGrid grid = build_magnitude_grid(2.0, 20);
  const Budget budget(part, grid, 2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(count_family(budget, 6));
}
BENCHMARK(BM_CountFamily)->Arg(4)->Arg(16)->Arg(64);

void BM_EnumerateFamily(benchmark::State& state) {
  const Partition part = build_partition(unit_box(1), 0.26);
  const MagnitudeGrid grid = build_magnitude_grid(1.0, static_cast<std::uint32_t>(state.range(0)));
  const Budget budget(part, grid, 2.0, 1.0);
  std::size_t members = 0;
  for (auto _ : state) {
    FamilyEnumerator e(budget, 2);
    NetMember m;
    members = 0;
    while (e.next(m)) ++members;
    benchmark::DoNotOptimize(members);
  }
  state.counters["members"] = static_cast<double>(members);
}
BENCHMARK(BM_EnumerateFamily)->Arg(4)->Arg(8)->Arg(16);

void BM_Apply(benchmark::State& state) {
  const Domain dom = unit_box(2);
  const Kernel k = gaussian(dom);
  const Partition in = quadrature_grid(dom, 1.0 / static_cast<double>(state.range(0)), 3);
  const Partition out = quadrature_grid(dom, 0.25, 3);
  const DiscreteOperator op(k, in, out);
  const auto xs = sample_ball(in, 1, 2.0, 1.0, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(xs[0]));
}
BENCHMARK(BM_Apply)->Arg(4)->Arg(16);

void BM_DirectedDistance(benchmark::State& state) {
  const Domain dom = unit_box(1);
  const Kernel k = gaussian(dom);
  const Partition in = quadrature_grid(dom, 0.1, 3);
  const Partition out = quadrature_grid(dom, 0.1, 3);
  const DiscreteOperator op(k, in, out);
  const MagnitudeGrid grid = build_magnitude_grid(1.5, 10);
  const DirectionNet net = build_sigma_net(1, 1.0);
  const Budget budget(in, grid, 2.0, 1.0);
  const auto family = sample_family(budget, net.size(), static_cast<std::size_t>(state.range(0)), 3);
  const auto images = image_of_family(op, family, grid, net);
  std::vector<SampledFn> samples;
  for (const auto& x : sample_ball(in, 1, 2.0, 1.0, 1000, 4)) samples.push_back(op.apply(x));
  for (auto _ : state) {
    benchmark::DoNotOptimize(directed_distance(samples, images, out, 2.0));
  }
}
BENCHMARK(BM_DirectedDistance)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SigmaNet(benchmark::State& state) {
  const double sigma = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(build_sigma_net(3, sigma).size());
}
BENCHMARK(BM_SigmaNet)->Arg(100)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
