#pragma once

#include <stdexcept>
#include <string>

namespace ddbar {

// Every failure the library raises derives from Error and carries a short
// machine-friendly kind string, which the CLI forwards in its error object.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& w) : Error("dimension_mismatch", w) {}
};

// A subspace was expected to sit inside another and does not.
struct ContainmentViolation : Error {
  explicit ContainmentViolation(const std::string& w) : Error("containment_violation", w) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& w) : Error("singular_matrix", w) {}
};

struct ParseError : Error {
  ParseError(const std::string& w, std::size_t pos)
      : Error("parse_error", w + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct InvalidComplex : Error {
  explicit InvalidComplex(const std::string& w) : Error("invalid_complex", w) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error("invalid_input", w) {}
};

// Two routes that must agree by theorem disagreed; always an implementation bug.
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& w) : Error("consistency_failure", w) {}
};

}  // namespace ddbar
