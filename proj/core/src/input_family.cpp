#include "hsnet/input_family.hpp"

#include "hsnet/error.hpp"
#include "hsnet/geometry.hpp"
#include "hsnet/sphere_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hsnet {

PiecewiseConstFn realize(const NetMember& member, const MagnitudeGrid& grid,
                         const DirectionNet& net) {
  if (member.magnitude.size() != member.direction.size()) {
    throw InvalidArgument("net member has mismatched index vectors");
  }
  PiecewiseConstFn out;
  out.cell_values.reserve(member.cell_count());
  for (std::size_t i = 0; i < member.cell_count(); ++i) {
    const double z = grid.value(member.magnitude[i]);
    if (z == 0.0) {
      out.cell_values.push_back(Eigen::VectorXd::Zero(net.dim()));
    } else {
      out.cell_values.push_back(z * net.point(member.direction[i]));
    }
  }
  return out;
}

SampledFn to_sampled(const PiecewiseConstFn& x, const Partition& partition) {
  if (x.cell_count() != partition.size()) {
    throw InvalidArgument("piecewise function does not match the partition");
  }
  SampledFn out = SampledFn::zero(x.dim(), partition.node_count());
  const auto& owner = partition.node_cells();
  for (std::size_t w = 0; w < partition.node_count(); ++w) {
    out.values.col(static_cast<Eigen::Index>(w)) = x.cell_values[owner[w]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Budget dynamic program

struct FamilyTable::Impl {
  virtual ~Impl() = default;
  virtual NetMember sample(Rng& rng) const = 0;
  virtual std::size_t states() const = 0;
};

namespace {

struct ExactModel {
  const Budget* budget;
  using Key = std::uint64_t;
  Key start() const { return 0; }
  bool step(std::size_t, Key s, std::uint32_t j, Key& out) const {
    out = s + budget->unit_cost(j);
    return out <= budget->unit_capacity();
  }
};

struct FloatModel {
  const Budget* budget;
  using Key = double;
  Key start() const { return 0.0; }
  bool step(std::size_t cell, Key s, std::uint32_t j, Key& out) const {
    out = s + budget->cell_cost(cell, j);
    return out <= budget->float_capacity();
  }
};

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::uint32_t pick_direction(std::uint32_t j, std::size_t directions, Rng& rng) {
  if (j == 0) return 0;
  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(directions - 1));
  return pick(rng);
}

// Every profile fits: magnitudes are iid uniform.
struct UnconstrainedImpl final : FamilyTable::Impl {
  std::size_t cells;
  std::uint32_t levels;
  std::size_t directions;

  NetMember sample(Rng& rng) const override {
    NetMember m = NetMember::zero(cells);
    std::uniform_int_distribution<std::uint32_t> level(0, levels - 1);
    for (std::size_t i = 0; i < cells; ++i) {
      m.magnitude[i] = level(rng);
      m.direction[i] = pick_direction(m.magnitude[i], directions, rng);
    }
    return m;
  }
  std::size_t states() const override { return 0; }
};

template <class Model>
struct LayeredImpl final : FamilyTable::Impl {
  using Key = typename Model::Key;

  Model model;
  std::size_t cells;
  std::uint32_t levels;
  std::size_t directions;
  std::vector<std::vector<Key>> layers;
  std::vector<std::vector<double>> log_profiles;

  LayeredImpl(Model m, std::size_t n_cells, std::uint32_t n_levels,
              std::size_t n_dirs, std::size_t max_states, BigInt& count,
              BigInt& profiles)
      : model(m), cells(n_cells), levels(n_levels), directions(n_dirs) {
    layers.resize(cells + 1);
    layers[0] = {model.start()};
    std::size_t total = 1;
    for (std::size_t i = 0; i < cells; ++i) {
      auto& next = layers[i + 1];
      for (Key s : layers[i]) {
        for (std::uint32_t j = 0; j < levels; ++j) {
          Key out{};
          if (!model.step(i, s, j, out)) break;
          next.push_back(out);
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      total += next.size();
      if (total > max_states) {
        throw BudgetIntractable(
            "budget dynamic program exceeds " + std::to_string(max_states) +
            " states; coarsen the partition or magnitude grid");
      }
    }

    log_profiles.resize(cells + 1);
    log_profiles[cells].assign(layers[cells].size(), 0.0);
    std::vector<BigInt> weighted(layers[cells].size(), BigInt(1));
    std::vector<BigInt> plain(layers[cells].size(), BigInt(1));
    const BigInt c(directions);
    for (std::size_t i = cells; i-- > 0;) {
      const auto& here = layers[i];
      const auto& there = layers[i + 1];
      std::vector<BigInt> w_here(here.size());
      std::vector<BigInt> p_here(here.size());
      auto& lp_here = log_profiles[i];
      lp_here.assign(here.size(), -std::numeric_limits<double>::infinity());
      for (std::size_t k = 0; k < here.size(); ++k) {
        for (std::uint32_t j = 0; j < levels; ++j) {
          Key out{};
          if (!model.step(i, here[k], j, out)) break;
          const auto idx = static_cast<std::size_t>(
              std::lower_bound(there.begin(), there.end(), out) - there.begin());
          lp_here[k] = log_add(lp_here[k], log_profiles[i + 1][idx]);
          p_here[k] += plain[idx];
          if (j == 0) {
            w_here[k] += weighted[idx];
          } else {
            w_here[k] += c * weighted[idx];
          }
        }
      }
      weighted = std::move(w_here);
      plain = std::move(p_here);
    }
    count = weighted.front();
    profiles = plain.front();
  }

  NetMember sample(Rng& rng) const override {
    NetMember m = NetMember::zero(cells);
    Key s = model.start();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weight;
    std::vector<Key> outs;
    for (std::size_t i = 0; i < cells; ++i) {
      const auto& there = layers[i + 1];
      weight.clear();
      outs.clear();
      double top = -std::numeric_limits<double>::infinity();
      for (std::uint32_t j = 0; j < levels; ++j) {
        Key out{};
        if (!model.step(i, s, j, out)) break;
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(there.begin(), there.end(), out) - there.begin());
        weight.push_back(log_profiles[i + 1][idx]);
        outs.push_back(out);
        top = std::max(top, weight.back());
      }
      double total = 0.0;
      for (double& w : weight) {
        w = std::exp(w - top);
        total += w;
      }
      double u = unit(rng) * total;
      std::uint32_t chosen = static_cast<std::uint32_t>(weight.size() - 1);
      for (std::uint32_t j = 0; j < weight.size(); ++j) {
        if (u < weight[j]) {
          chosen = j;
          break;
        }
        u -= weight[j];
      }
      m.magnitude[i] = chosen;
      m.direction[i] = pick_direction(chosen, directions, rng);
      s = outs[chosen];
    }
    return m;
  }

  std::size_t states() const override {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
  }
};

bool everything_fits(const Budget& budget) {
  const std::uint32_t top = budget.levels() - 1;
  if (budget.arithmetic() == BudgetArithmetic::exact_integer) {
    return budget.unit_cost(top) * budget.cells() <= budget.unit_capacity();
  }
  double used = 0.0;
  for (std::size_t i = 0; i < budget.cells(); ++i) used += budget.cell_cost(i, top);
  return used <= budget.float_capacity();
}

BigInt big_pow(const BigInt& base, std::size_t e) {
  BigInt out(1);
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

FamilyTable::FamilyTable(const Budget& budget, std::size_t directions,
                         const FamilyDpOptions& options) {
  if (directions < 1) throw InvalidArgument("direction net is empty");
  const std::size_t cells = budget.cells();
  const std::uint32_t levels = budget.levels();
  if (everything_fits(budget)) {
    auto impl = std::make_unique<UnconstrainedImpl>();
    impl->cells = cells;
    impl->levels = levels;
    impl->directions = directions;
    impl_ = std::move(impl);
    count_ = big_pow(BigInt(1) + BigInt(levels - 1) * BigInt(directions), cells);
    profiles_ = big_pow(BigInt(levels), cells);
    return;
  }
  if (budget.arithmetic() == BudgetArithmetic::exact_integer) {
    impl_ = std::make_unique<LayeredImpl<ExactModel>>(
        ExactModel{&budget}, cells, levels, directions, options.max_states,
        count_, profiles_);
  } else {
    impl_ = std::make_unique<LayeredImpl<FloatModel>>(
        FloatModel{&budget}, cells, levels, directions, options.max_states,
        count_, profiles_);
  }
}

FamilyTable::~FamilyTable() = default;
FamilyTable::FamilyTable(FamilyTable&&) noexcept = default;
FamilyTable& FamilyTable::operator=(FamilyTable&&) noexcept = default;

std::size_t FamilyTable::state_count() const noexcept { return impl_->states(); }

NetMember FamilyTable::sample(Rng& rng) const { return impl_->sample(rng); }

// ---------------------------------------------------------------------------
// Enumeration

FamilyEnumerator::FamilyEnumerator(const Budget& budget, std::size_t directions)
    : budget_(&budget), directions_(directions) {
  if (directions < 1) throw InvalidArgument("direction net is empty");
  current_ = NetMember::zero(budget.cells());
  used_units_.assign(budget.cells() + 1, 0);
  used_float_.assign(budget.cells() + 1, 0.0);
}

bool FamilyEnumerator::feasible_step(std::size_t cell, std::uint32_t j) const {
  if (budget_->arithmetic() == BudgetArithmetic::exact_integer) {
    return used_units_[cell] + budget_->unit_cost(j) <= budget_->unit_capacity();
  }
  return used_float_[cell] + budget_->cell_cost(cell, j) <=
         budget_->float_capacity();
}

bool FamilyEnumerator::next(NetMember& out) {
  if (done_) return false;
  const std::size_t n = budget_->cells();
  if (!started_) {
    started_ = true;
    out = current_;
    return true;
  }
  const std::uint32_t top = budget_->levels() - 1;
  for (std::size_t i = n; i-- > 0;) {
    auto& j = current_.magnitude[i];
    auto& l = current_.direction[i];
    bool advanced = false;
    if (j > 0 && l + 1 < directions_) {
      ++l;
      advanced = true;
    } else if (j < top && feasible_step(i, j + 1)) {
      ++j;
      l = 0;
      advanced = true;
    }
    if (advanced) {
      // Later cells restart at zero magnitude, which never spends budget.
      for (std::size_t t = i + 1; t < n; ++t) {
        current_.magnitude[t] = 0;
        current_.direction[t] = 0;
      }
      for (std::size_t t = i; t < n; ++t) {
        const std::uint32_t jt = current_.magnitude[t];
        if (budget_->arithmetic() == BudgetArithmetic::exact_integer) {
          used_units_[t + 1] = used_units_[t] + budget_->unit_cost(jt);
        } else {
          used_float_[t + 1] = used_float_[t] + budget_->cell_cost(t, jt);
        }
      }
      out = current_;
      return true;
    }
    j = 0;
    l = 0;
  }
  done_ = true;
  return false;
}

// ---------------------------------------------------------------------------

BigInt count_family(const Budget& budget, std::size_t directions) {
  return FamilyTable(budget, directions).count();
}

BigInt count_family(const Partition& partition, const MagnitudeGrid& grid,
                    const DirectionNet& net, double p, double r) {
  if (partition.size() == 0) throw InvalidArgument("empty partition");
  return count_family(Budget(partition, grid, p, r), net.size());
}

std::vector<NetMember> enumerate_family(const Budget& budget,
                                        std::size_t directions,
                                        std::size_t cap) {
  try {
    const BigInt count = count_family(budget, directions);
    if (count > BigInt(cap)) throw FamilyTooLarge(count.str(), cap);
  } catch (const BudgetIntractable&) {
    // Fall through: the stream below enforces the cap on its own.
  }
  std::vector<NetMember> out;
  FamilyEnumerator it(budget, directions);
  NetMember m;
  while (it.next(m)) {
    if (out.size() >= cap) throw FamilyTooLarge("more than " + std::to_string(cap), cap);
    out.push_back(m);
  }
  return out;
}

std::vector<NetMember> enumerate_family(const Partition& partition,
                                        const MagnitudeGrid& grid,
                                        const DirectionNet& net, double p,
                                        double r, std::size_t cap) {
  return enumerate_family(Budget(partition, grid, p, r), net.size(), cap);
}

std::vector<NetMember> sample_family(const Budget& budget,
                                     std::size_t directions, std::size_t count,
                                     std::uint64_t seed) {
  std::vector<NetMember> out;
  if (count == 0) return out;
  const FamilyTable table(budget, directions);
  Rng rng(seed);
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) out.push_back(table.sample(rng));
  return out;
}

std::vector<NetMember> sample_family(const Partition& partition,
                                     const MagnitudeGrid& grid,
                                     const DirectionNet& net, double p,
                                     double r, std::size_t count,
                                     std::uint64_t seed) {
  return sample_family(Budget(partition, grid, p, r), net.size(), count, seed);
}

}  // namespace hsnet
