#pragma once

#include "hsnet/budget.hpp"
#include "hsnet/functions.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hsnet {

class DirectionNet;
class Partition;

// The four stages that carry an element of the L_p ball onto a member of the
// finite family: radial clipping at gamma, cell averaging, flooring the cell
// magnitudes onto the grid, and snapping cell directions onto the net.

//! Values with norm above gamma are radially rescaled to norm gamma.
SampledFn clip_to_gamma(const SampledFn& x, double gamma);

//! Quadrature measure of the nodes where |x| > gamma.
double measure_above(const SampledFn& x, const Partition& partition,
                     double gamma);

//! Per-cell quadrature mean.
PiecewiseConstFn cell_average(const SampledFn& x, const Partition& partition);

struct RoundedFn {
  PiecewiseConstFn values;
  std::vector<std::uint32_t> magnitude;
};

/*!
  Floors each cell magnitude onto the grid: |x_i| in [z_j, z_{j+1}) maps to
  z_j with the direction kept. Magnitudes 0 and gamma are kept. Throws
  InvalidArgument when a magnitude exceeds gamma.
*/
RoundedFn round_magnitude(const PiecewiseConstFn& x, const MagnitudeGrid& grid);

struct SnappedFn {
  NetMember member;
  PiecewiseConstFn values;
};

//! Replaces each nonzero cell direction with its nearest net point.
SnappedFn snap_direction(const RoundedFn& x, const MagnitudeGrid& grid,
                         const DirectionNet& net);

struct StageDisplacement {
  //! Largest pointwise |before - after| over nodes.
  double sup = 0.0;
  //! L_p norm of before - after.
  double lp = 0.0;
};

struct ProjectionReport {
  StageDisplacement clip;
  StageDisplacement average;
  StageDisplacement round;
  StageDisplacement snap;
  double measure_above_gamma = 0.0;
  double budget_usage = 0.0;
  //! Cells lowered one grid step because rounding noise broke the budget.
  std::size_t budget_repairs = 0;
};

struct Projection {
  SampledFn clipped;
  PiecewiseConstFn averaged;
  RoundedFn rounded;
  SnappedFn snapped;
  ProjectionReport report;
};

Projection project_to_net(const SampledFn& x, const Partition& partition,
                          const MagnitudeGrid& grid, const DirectionNet& net,
                          const Budget& budget);
Projection project_to_net(const SampledFn& x, double gamma,
                          const Partition& partition, const MagnitudeGrid& grid,
                          const DirectionNet& net, double p, double r);

}  // namespace hsnet
