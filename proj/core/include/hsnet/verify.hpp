#pragma once

#include "hsnet/ball_sampler.hpp"
#include "hsnet/bounds.hpp"
#include "hsnet/budget.hpp"
#include "hsnet/functions.hpp"
#include "hsnet/input_family.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hsnet {

class DirectionNet;
class DiscreteOperator;
class Partition;

/*!
  max over `from` of min over `to` of the L_q distance on `partition`.

  The inner scan stops once it finds a member closer than the running
  maximum, and skips members ruled out by the triangle inequality on cached
  norms. Throws InvalidArgument when `to` is empty.
*/
double directed_distance(std::span<const SampledFn> from,
                         std::span<const SampledFn> to,
                         const Partition& partition, double q);

//! Larger of the two directed distances; symmetric in U and V.
double hausdorff_distance(std::span<const SampledFn> u,
                          std::span<const SampledFn> v,
                          const Partition& partition, double q);

struct StepRecord {
  //! Proof step: 2 clip, 3 average, 4 round, 5 snap.
  int step = 0;
  std::string name;
  double bound = 0.0;
  //! Largest image-space L_q displacement over the samples.
  double observed = 0.0;
  bool pass = true;
};

struct TchebyshevRecord {
  double bound = 0.0;
  //! Largest quadrature measure of {|x| > gamma} over the samples.
  double observed = 0.0;
  bool pass = true;
};

struct VerifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  BallSampleOptions ball;
  double lambda = 0.0;
  //! Absolute slack on every displacement comparison.
  double tolerance = 1e-8;
  double tchebyshev_tolerance = 1e-10;
  //! Multiplies every certified bound; values below 1 exercise failure paths.
  double bound_scale = 1.0;
  bool strict_metrics = false;
};

struct StepsReport {
  BoundBreakdown bound;
  std::vector<StepRecord> steps;
  TchebyshevRecord tchebyshev;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t budget_repairs = 0;
  bool pass = true;
};

/*!
  Runs the projection pipeline on sampled ball elements and compares each
  stage's image-space displacement with its certified share of the bound:
  step 2 with c* M / gamma^(p-1), step 3 with psi, step 4 with phi and
  step 5 with alpha.
*/
StepsReport verify_steps(const DiscreteOperator& op,
                         const KernelMetrics& metrics,
                         const MagnitudeGrid& grid, const DirectionNet& net,
                         double p, double r, const VerifyOptions& options);

enum class FamilyMode { enumerate, sample };

std::string_view to_string(FamilyMode m);
FamilyMode parse_family_mode(std::string_view s);

struct CoverageOptions {
  VerifyOptions verify;
  FamilyMode family_mode = FamilyMode::enumerate;
  std::size_t family_samples = 10000;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

struct CurvePoint {
  std::size_t samples;
  double distance;
};

struct CoverageReport {
  BoundBreakdown bound;
  FamilyMode family_mode = FamilyMode::enumerate;
  //! Exact family size in decimal.
  std::string family_count;
  //! Family images actually compared against.
  std::size_t family_images = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  //! Directed distance from sampled images to the family images: a lower
  //! estimate of the directed Hausdorff distance from the true image.
  double observed = 0.0;
  //! Family images to sampled images; informational only.
  double reverse = 0.0;
  //! Largest image distance between a sample and its projection.
  double projected = 0.0;
  double ratio = 0.0;
  std::vector<CurvePoint> max_so_far;
  bool pass = true;
};

/*!
  Builds the family image set (all members, or DP-uniform samples plus the
  projections of the ball samples in sample mode) and checks the directed
  distance from sampled images against the certified total.
*/
CoverageReport verify_coverage(const DiscreteOperator& op,
                               const KernelMetrics& metrics,
                               const MagnitudeGrid& grid, const DirectionNet& net,
                               double p, double r, const CoverageOptions& options);

struct VerificationReport {
  StepsReport steps;
  CoverageReport coverage;
  bool pass = true;
};

VerificationReport verify_all(const DiscreteOperator& op,
                              const KernelMetrics& metrics,
                              const MagnitudeGrid& grid, const DirectionNet& net,
                              double p, double r, const CoverageOptions& options);

}  // namespace hsnet
