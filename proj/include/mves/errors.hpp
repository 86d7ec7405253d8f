#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mves {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together (non-square, mismatched lengths, n < 2, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A pivot fell below the scale-aware singularity threshold.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Vertex set or half-space description that does not span a full simplex.
class DegenerateSimplexError : public Error {
 public:
  using Error::Error;
};

/// Data whose affine hull has lower dimension than requested.
class AffineDimensionError : public Error {
 public:
  AffineDimensionError(const std::string& what, std::size_t observed_rank)
      : Error(what), observed_rank_(observed_rank) {}
  std::size_t observed_rank() const noexcept { return observed_rank_; }

 private:
  std::size_t observed_rank_;
};

/// Input values outside their admissible set (off-simplex abundances, NaN, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Empty or otherwise unusable argument lists.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Matrix that must have full column or row rank but does not.
class RankError : public Error {
 public:
  using Error::Error;
};

/// The purity cap rejects (almost) every Dirichlet draw.
class PurityCapError : public Error {
 public:
  using Error::Error;
};

/// A state that valid inputs cannot reach; signals a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Short snake_case name of the most derived library error type, or
/// "error" for anything else.
inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension_error";
  if (dynamic_cast<const SingularMatrixError*>(&e)) return "singular_matrix_error";
  if (dynamic_cast<const DegenerateSimplexError*>(&e)) return "degenerate_simplex_error";
  if (dynamic_cast<const AffineDimensionError*>(&e)) return "affine_dimension_error";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation_error";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const ArgumentError*>(&e)) return "argument_error";
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const RankError*>(&e)) return "rank_error";
  if (dynamic_cast<const PurityCapError*>(&e)) return "purity_cap_error";
  if (dynamic_cast<const InternalError*>(&e)) return "internal_error";
  return "error";
}

}  // namespace mves
