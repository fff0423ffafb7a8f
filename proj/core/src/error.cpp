#include "hsnet/error.hpp"

#include <string>

namespace hsnet {

FamilyTooLarge::FamilyTooLarge(const std::string& count, std::size_t cap)
    : std::runtime_error("family-too-large: " + count +
                         " members exceed the enumeration cap of " +
                         std::to_string(cap) + "; use sampling mode"),
      count_(count),
      cap_(cap) {}

CoverageUnverifiable::CoverageUnverifiable(int dim, double sigma,
                                           std::size_t required_pool,
                                           std::size_t max_pool)
    : std::runtime_error(
          "coverage-unverifiable: a sigma-net with sigma=" +
          std::to_string(sigma) + " on the sphere in R^" +
          std::to_string(dim) + " needs a candidate pool of about " +
          std::to_string(required_pool) + " points (limit " +
          std::to_string(max_pool) + ")"),
      required_pool_(required_pool) {}

}  // namespace hsnet
