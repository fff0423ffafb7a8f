#include "hsnet/verify.hpp"

#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/norms.hpp"
#include "hsnet/operator.hpp"
#include "hsnet/parallel.hpp"
#include "hsnet/projection.hpp"
#include "hsnet/sphere_net.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>

namespace hsnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_q(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw InvalidArgument("q must be a finite real greater than 1");
  }
}

// L_q distance, or +inf as soon as the partial sum passes limit^q.
double capped_distance(const SampledFn& a, const SampledFn& b,
                       const std::vector<double>& weights, double q,
                       double limit) {
  const double cap = limit == kInf ? kInf : std::pow(limit, q);
  const Eigen::Index rows = a.values.rows();
  const double* pa = a.values.data();
  const double* pb = b.values.data();
  double sum = 0.0;
  for (std::size_t w = 0; w < weights.size(); ++w) {
    double sq = 0.0;
    for (Eigen::Index c = 0; c < rows; ++c) {
      const double d = pa[c] - pb[c];
      sq += d * d;
    }
    pa += rows;
    pb += rows;
    if (sq != 0.0) sum += weights[w] * std::pow(sq, q / 2.0);
    if (sum > cap) return kInf;
  }
  return std::pow(sum, 1.0 / q);
}

struct Prepared {
  std::vector<double> weights;
  std::vector<double> from_norms;
  std::vector<double> to_norms;
};

Prepared prepare(std::span<const SampledFn> from, std::span<const SampledFn> to,
                 const Partition& partition, double q) {
  check_q(q);
  if (to.empty()) throw InvalidArgument("directed distance: empty target set");
  Prepared p;
  for (const auto& node : partition.nodes()) p.weights.push_back(node.weight);
  const auto check = [&](const SampledFn& f) {
    if (f.node_count() != p.weights.size()) {
      throw InvalidArgument("sampled function does not match the output nodes");
    }
    if (f.dim() != to.front().dim()) {
      throw InvalidArgument("directed distance: dimension mismatch");
    }
  };
  for (const auto& f : from) check(f);
  for (const auto& t : to) check(t);
  p.from_norms.resize(from.size());
  p.to_norms.resize(to.size());
  parallel_for(from.size(), [&](std::size_t i) {
    p.from_norms[i] = lp_norm(from[i], partition, q);
  });
  parallel_for(to.size(), [&](std::size_t i) {
    p.to_norms[i] = lp_norm(to[i], partition, q);
  });
  return p;
}

// Nearest distance from f to the set, stopping early once below `floor`.
double nearest(const SampledFn& f, double f_norm, std::span<const SampledFn> to,
               const Prepared& prep, double q, double start, double floor) {
  double best = start;
  for (std::size_t t = 0; t < to.size(); ++t) {
    if (best <= floor) break;
    if (std::abs(f_norm - prep.to_norms[t]) >= best) continue;
    const double d = capped_distance(f, to[t], prep.weights, q, best);
    if (d < best) best = d;
  }
  return best;
}

void atomic_max(std::atomic<double>& target, double value) {
  double current = target.load();
  while (value > current && !target.compare_exchange_weak(current, value)) {
  }
}

// Exact per-element nearest distances; `start[i]` is a known upper bound.
std::vector<double> nearest_all(std::span<const SampledFn> from,
                                std::span<const SampledFn> to,
                                const Partition& partition, double q,
                                const std::vector<double>& start) {
  const Prepared prep = prepare(from, to, partition, q);
  std::vector<double> out(from.size());
  parallel_for(from.size(), [&](std::size_t i) {
    out[i] = nearest(from[i], prep.from_norms[i], to, prep, q, start[i], -1.0);
  });
  return out;
}

}  // namespace

double directed_distance(std::span<const SampledFn> from,
                         std::span<const SampledFn> to,
                         const Partition& partition, double q) {
  const Prepared prep = prepare(from, to, partition, q);
  // Elements that stop early end below the running max, so they cannot change
  // the result; the max itself is order independent.
  std::atomic<double> running{0.0};
  parallel_for(from.size(), [&](std::size_t i) {
    const double d = nearest(from[i], prep.from_norms[i], to, prep, q, kInf,
                             running.load());
    atomic_max(running, d);
  });
  return running.load();
}

double hausdorff_distance(std::span<const SampledFn> u,
                          std::span<const SampledFn> v,
                          const Partition& partition, double q) {
  if (u.empty() || v.empty()) throw InvalidArgument("hausdorff distance: empty set");
  return std::max(directed_distance(u, v, partition, q),
                  directed_distance(v, u, partition, q));
}

std::string_view to_string(FamilyMode m) {
  return m == FamilyMode::enumerate ? "enumerate" : "sample";
}

FamilyMode parse_family_mode(std::string_view s) {
  if (s == "enumerate") return FamilyMode::enumerate;
  if (s == "sample") return FamilyMode::sample;
  throw InvalidArgument("unknown family mode '" + std::string(s) + "'");
}

namespace {

BoundBreakdown bound_for(const DiscreteOperator& op, const KernelMetrics& metrics,
                         const MagnitudeGrid& grid, const DirectionNet& net,
                         double p, double r, const VerifyOptions& o) {
  const auto& partition = op.input();
  return error_bound({p, r, partition.domain().measure(), o.lambda, grid.gamma(),
                      partition.delta(), grid.step(), net.sigma()},
                     metrics, o.strict_metrics);
}

struct SampleRun {
  std::vector<SampledFn> inputs;
  std::vector<Projection> projections;
};

SampleRun run_samples(const DiscreteOperator& op, const MagnitudeGrid& grid,
                      const DirectionNet& net, const Budget& budget, double p,
                      double r, const VerifyOptions& o) {
  if (o.samples == 0) throw InvalidArgument("verification needs at least one sample");
  if (net.dim() != op.cols()) {
    throw InvalidArgument("net dimension differs from kernel columns");
  }
  SampleRun run;
  run.inputs = sample_ball(op.input(), op.cols(), p, r, o.samples, o.seed, o.ball);
  run.projections.resize(run.inputs.size());
  parallel_for(run.inputs.size(), [&](std::size_t i) {
    run.projections[i] = project_to_net(run.inputs[i], op.input(), grid, net, budget);
  });
  return run;
}

}  // namespace

StepsReport verify_steps(const DiscreteOperator& op,
                         const KernelMetrics& metrics,
                         const MagnitudeGrid& grid, const DirectionNet& net,
                         double p, double r, const VerifyOptions& o) {
  const double q = Exponents::from_p(p).q;
  StepsReport report;
  report.bound = bound_for(op, metrics, grid, net, p, r, o);
  report.samples = o.samples;
  report.seed = o.seed;

  const Budget budget(op.input(), grid, p, r);
  const SampleRun run = run_samples(op, grid, net, budget, p, r, o);

  std::vector<std::array<double, 4>> displacement(run.inputs.size());
  parallel_for(run.inputs.size(), [&](std::size_t i) {
    const auto& pr = run.projections[i];
    const SampledFn images[5] = {
        op.apply(run.inputs[i]), op.apply(pr.clipped), op.apply(pr.averaged),
        op.apply(pr.rounded.values), op.apply(pr.snapped.values)};
    for (int s = 0; s < 4; ++s) {
      displacement[i][static_cast<std::size_t>(s)] =
          lp_distance(images[s], images[s + 1], op.output(), q);
    }
  });

  const double bounds[4] = {report.bound.tail, report.bound.psi, report.bound.phi,
                            report.bound.alpha};
  const char* names[4] = {"clip", "average", "round", "snap"};
  for (std::size_t s = 0; s < 4; ++s) {
    StepRecord rec;
    rec.step = static_cast<int>(s) + 2;
    rec.name = names[s];
    rec.bound = bounds[s] * o.bound_scale;
    for (const auto& d : displacement) rec.observed = std::max(rec.observed, d[s]);
    rec.pass = rec.observed <= rec.bound + o.tolerance;
    report.pass = report.pass && rec.pass;
    report.steps.push_back(std::move(rec));
  }

  report.tchebyshev.bound = std::pow(r, p) / std::pow(grid.gamma(), p) * o.bound_scale;
  for (const auto& pr : run.projections) {
    report.tchebyshev.observed =
        std::max(report.tchebyshev.observed, pr.report.measure_above_gamma);
    report.budget_repairs += pr.report.budget_repairs;
  }
  report.tchebyshev.pass = report.tchebyshev.observed <=
                           report.tchebyshev.bound + o.tchebyshev_tolerance;
  report.pass = report.pass && report.tchebyshev.pass;
  return report;
}

CoverageReport verify_coverage(const DiscreteOperator& op,
                               const KernelMetrics& metrics,
                               const MagnitudeGrid& grid, const DirectionNet& net,
                               double p, double r, const CoverageOptions& options) {
  const VerifyOptions& o = options.verify;
  const double q = Exponents::from_p(p).q;
  CoverageReport report;
  report.bound = bound_for(op, metrics, grid, net, p, r, o);
  report.family_mode = options.family_mode;
  report.samples = o.samples;
  report.seed = o.seed;

  const Budget budget(op.input(), grid, p, r);
  const SampleRun run = run_samples(op, grid, net, budget, p, r, o);

  std::vector<NetMember> members;
  if (options.family_mode == FamilyMode::enumerate) {
    members = enumerate_family(budget, net.size(), options.enumeration_cap);
    try {
      report.family_count = count_family(budget, net.size()).str();
    } catch (const BudgetIntractable&) {
      report.family_count = std::to_string(members.size());
    }
  } else {
    const FamilyTable table(budget, net.size());
    report.family_count = table.count().str();
    // Offset the seed so family draws are independent of the ball draws.
    members = sample_family(budget, net.size(), options.family_samples,
                            o.seed ^ 0x9e3779b97f4a7c15ULL);
    // Projections are family members; including them keeps the sampled
    // family from being uninformatively sparse.
    for (const auto& pr : run.projections) members.push_back(pr.snapped.member);
  }
  const std::vector<SampledFn> family = image_of_family(op, members, grid, net);
  report.family_images = family.size();

  std::vector<SampledFn> images(run.inputs.size());
  std::vector<double> projected(run.inputs.size());
  parallel_for(run.inputs.size(), [&](std::size_t i) {
    images[i] = op.apply(run.inputs[i]);
    projected[i] = lp_distance(images[i], op.apply(run.projections[i].snapped.values),
                               op.output(), q);
  });
  // A sample's projection lies in the family, so its distance seeds the scan.
  const std::vector<double> nearest_d =
      nearest_all(images, family, op.output(), q, projected);

  std::size_t checkpoint = 1;
  for (std::size_t i = 0; i < nearest_d.size(); ++i) {
    report.observed = std::max(report.observed, nearest_d[i]);
    report.projected = std::max(report.projected, projected[i]);
    if (i + 1 == checkpoint || i + 1 == nearest_d.size()) {
      report.max_so_far.push_back({i + 1, report.observed});
      checkpoint *= 2;
    }
  }
  report.reverse = directed_distance(family, images, op.output(), q);

  const double total = report.bound.total * o.bound_scale;
  report.ratio = total > 0.0 ? report.observed / total : 0.0;
  const auto& b = report.bound;
  const double pipeline = (((b.tail + b.psi) + b.phi) + b.alpha) * o.bound_scale;
  report.pass = report.observed <= total + o.tolerance &&
                report.projected <= pipeline + o.tolerance;
  return report;
}

VerificationReport verify_all(const DiscreteOperator& op,
                              const KernelMetrics& metrics,
                              const MagnitudeGrid& grid, const DirectionNet& net,
                              double p, double r, const CoverageOptions& options) {
  VerificationReport out;
  out.steps = verify_steps(op, metrics, grid, net, p, r, options.verify);
  out.coverage = verify_coverage(op, metrics, grid, net, p, r, options);
  out.pass = out.steps.pass && out.coverage.pass;
  return out;
}

}  // namespace hsnet
