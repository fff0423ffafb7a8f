#pragma once

#include "hsnet/budget.hpp"
#include "hsnet/functions.hpp"
#include "hsnet/random.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace hsnet {

class DirectionNet;
class Partition;

struct FamilyDpOptions {
  //! Upper bound on stored dynamic-program states across all layers.
  std::size_t max_states = std::size_t{1} << 23;
};

/*!
  Layered dynamic program over cells on the discrete budget.

  Layer i holds every budget state reachable after assigning magnitudes to
  cells 0..i-1. Completion counts are propagated backwards: the weighted
  count (direction multiplicity c for nonzero magnitudes, 1 for zero) gives
  the family size; the unweighted profile count drives uniform sampling of
  magnitude profiles.
*/
class FamilyTable {
 public:
  FamilyTable(const Budget& budget, std::size_t directions,
              const FamilyDpOptions& options = {});
  ~FamilyTable();
  FamilyTable(FamilyTable&&) noexcept;
  FamilyTable& operator=(FamilyTable&&) noexcept;

  //! Number of distinct functions in the family.
  const BigInt& count() const noexcept { return count_; }
  //! Number of feasible magnitude profiles.
  const BigInt& profile_count() const noexcept { return profiles_; }
  std::size_t state_count() const noexcept;

  //! Uniform feasible magnitude profile, then uniform nonzero directions.
  NetMember sample(Rng& rng) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
  BigInt count_;
  BigInt profiles_;
};

/*!
  Streams the family in lexicographic order of (cell, magnitude, direction).

  The first member is the zero function. Every emitted member satisfies the
  budget predicate.
*/
class FamilyEnumerator {
 public:
  FamilyEnumerator(const Budget& budget, std::size_t directions);

  bool next(NetMember& out);

 private:
  bool feasible_step(std::size_t cell, std::uint32_t j) const;

  const Budget* budget_;
  std::size_t directions_;
  bool started_ = false;
  bool done_ = false;
  NetMember current_;
  // Budget consumed by cells [0, i), one entry per cell plus the total.
  std::vector<std::uint64_t> used_units_;
  std::vector<double> used_float_;
};

BigInt count_family(const Budget& budget, std::size_t directions);
BigInt count_family(const Partition& partition, const MagnitudeGrid& grid,
                    const DirectionNet& net, double p, double r);

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

//! Materializes the whole family; throws FamilyTooLarge above `cap`.
std::vector<NetMember> enumerate_family(const Budget& budget,
                                        std::size_t directions,
                                        std::size_t cap = kDefaultEnumerationCap);
std::vector<NetMember> enumerate_family(const Partition& partition,
                                        const MagnitudeGrid& grid,
                                        const DirectionNet& net, double p,
                                        double r,
                                        std::size_t cap = kDefaultEnumerationCap);

std::vector<NetMember> sample_family(const Budget& budget,
                                     std::size_t directions, std::size_t count,
                                     std::uint64_t seed);
std::vector<NetMember> sample_family(const Partition& partition,
                                     const MagnitudeGrid& grid,
                                     const DirectionNet& net, double p,
                                     double r, std::size_t count,
                                     std::uint64_t seed);

}  // namespace hsnet
