#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgglab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad dimension, probability out of range, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Bisection for the cap threshold did not reach the requested tolerance.
class CalibrationFailure : public Error {
 public:
  CalibrationFailure(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Input graph is not connected; carries one vertex from each of two different components.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph(const std::string& what, std::size_t a, std::size_t b)
      : Error(what), a_(a), b_(b) {}
  std::size_t vertex_a() const noexcept { return a_; }
  std::size_t vertex_b() const noexcept { return b_; }

 private:
  std::size_t a_;
  std::size_t b_;
};

/// Ear decomposition requested on a graph with a bridge (or that is disconnected).
class NotTwoEdgeConnected : public Error {
 public:
  NotTwoEdgeConnected(const std::string& what, std::size_t u, std::size_t v)
      : Error(what), u_(u), v_(v) {}
  /// Endpoints of a violating bridge, or two vertices in different components.
  std::size_t u() const noexcept { return u_; }
  std::size_t v() const noexcept { return v_; }

 private:
  std::size_t u_;
  std::size_t v_;
};

/// A closed walk has a repeated consecutive vertex (or is too short).
class InvalidWalk : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed its size guard.
class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Statistics outside the domain of a bound (e.g. g < t).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rgglab
