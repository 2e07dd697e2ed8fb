#pragma once

#include <stdexcept>
#include <string>

namespace mvie {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularPoint : Error {
  explicit SingularPoint(const std::string& what = "evaluation point coincides with the source") : Error(what) {}
};

struct BadDirection : Error {
  explicit BadDirection(const std::string& what = "direction is not a unit vector") : Error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what = "field dimensions do not match the domain") : Error(what) {}
};

struct DegenerateShape : Error {
  explicit DegenerateShape(const std::string& what = "shape is under-resolved at this spacing") : Error(what) {}
};

struct ProbeInsideDomain : Error {
  explicit ProbeInsideDomain(const std::string& what = "requested probe point lies inside the scatterer") : Error(what) {}
};

struct TooCloseToSupport : Error {
  explicit TooCloseToSupport(const std::string& what = "evaluation point is within one cell of the support") : Error(what) {}
};

struct RegimeViolation : Error {
  explicit RegimeViolation(const std::string& what = "medium violates the admissibility inequalities") : Error(what) {}
};

struct NotContractive : Error {
  explicit NotContractive(const std::string& what = "fixed-point iteration is not contracting") : Error(what) {}
};

struct MaxIterationsExceeded : Error {
  explicit MaxIterationsExceeded(const std::string& what = "iteration limit reached before convergence") : Error(what) {}
};

struct NotConverged : Error {
  explicit NotConverged(const std::string& what = "series truncation did not converge") : Error(what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace mvie
