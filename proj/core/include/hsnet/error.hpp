#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsnet {

//! Bad argument or violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! The finite input family has more members than the enumeration cap allows.
class FamilyTooLarge : public std::runtime_error {
 public:
  FamilyTooLarge(const std::string& count, std::size_t cap);

  const std::string& count() const noexcept { return count_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::string count_;
  std::size_t cap_;
};

//! The budget dynamic program would need more states than allowed.
class BudgetIntractable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! The candidate pool for a sphere covering cannot certify the requested sigma.
class CoverageUnverifiable : public std::runtime_error {
 public:
  CoverageUnverifiable(int dim, double sigma, std::size_t required_pool,
                       std::size_t max_pool);

  std::size_t required_pool() const noexcept { return required_pool_; }

 private:
  std::size_t required_pool_;
};

//! The modulus-of-continuity table does not resolve a small enough value.
class RefineOmega : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsnet
