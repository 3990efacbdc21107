#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monodromy {

// Input lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Structurally valid input whose magnitude would destroy all relative
// accuracy (e.g. theta series arguments beyond the overflow guard).
class OverflowError : public std::range_error {
public:
  using std::range_error::range_error;
};

// Integer parameter outside its documented range (level, index, gate power).
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

// Cubic discriminant vanishes to working precision; roots are not separable.
class DegenerateCurveError : public DomainError {
public:
  using DomainError::DomainError;
};

// Periods/modulus requested for a curve outside the three-real-root stratum.
class UnsupportedCurveError : public DomainError {
public:
  using DomainError::DomainError;
};

// Integration endpoints are not a consecutive pair of simple real roots with
// a positive integrand between them.
class RootOrderError : public DomainError {
public:
  using DomainError::DomainError;
};

// Third-kind pole lies on the closed integration interval.
class PoleOnPathError : public DomainError {
public:
  using DomainError::DomainError;
};

// A loop sample carries a (numerically) multiple root; continuation through
// it is meaningless.
class DegenerateSampleError : public DomainError {
public:
  using DomainError::DomainError;
};

// Root continuation between two consecutive samples is ambiguous at the
// current sampling density; carries the index of the sample at which the
// matching failed.
class RefinementNeeded : public std::runtime_error {
public:
  RefinementNeeded(std::size_t sample_index, const std::string& what_arg)
      : std::runtime_error(what_arg), sample_index_(sample_index) {}
  std::size_t sample_index() const noexcept { return sample_index_; }

private:
  std::size_t sample_index_;
};

// Automatic sample doubling hit its cap without meeting the step contract.
class RefinementExceededError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The unwrapped variation around a closed circuit is not within tolerance of
// an integer; no certificate can be issued.
class NonIntegralVariationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Holonomy input is not a unit complex number to working precision.
class NonUnitaryHolonomyError : public DomainError {
public:
  using DomainError::DomainError;
};

} // namespace monodromy
