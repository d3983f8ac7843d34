#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heliox {

/// Iterative solver did not converge within its iteration cap.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky factorisation of an overlap matrix hit a non-positive pivot.
class ConditioningError : public NumericalFailure {
 public:
  ConditioningError(std::size_t pivot, const std::string& what)
      : NumericalFailure(what), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Scalar minimisation bracket does not enclose an interior minimum.
class BracketError : public NumericalFailure {
 public:
  BracketError(double e_lo, double e_hi, const std::string& what)
      : NumericalFailure(what), e_lo_(e_lo), e_hi_(e_hi) {}

  double energy_lo() const noexcept { return e_lo_; }
  double energy_hi() const noexcept { return e_hi_; }

 private:
  double e_lo_;
  double e_hi_;
};

/// Occupation numbers inconsistent with a normalised state.
class ConsistencyError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace heliox
