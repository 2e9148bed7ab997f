#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netdesign {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cost model was evaluated outside its domain (Greenshields at x >= u).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PathLimitExceeded : public Error {
 public:
  explicit PathLimitExceeded(std::size_t limit)
      : Error("path enumeration exceeded limit of " + std::to_string(limit) + " paths"),
        limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

/// Two subgraphs of one template disagree on an edge's cost model or capacity.
class TemplateConsistencyError : public Error {
 public:
  using Error::Error;
};

class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class CapacitySaturation : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  explicit Unreachable(std::size_t trip)
      : Error("no path from source to sink for trip " + std::to_string(trip)), trip_(trip) {}
  std::size_t trip() const noexcept { return trip_; }

 private:
  std::size_t trip_;
};

/// Malformed input document or bad argument; maps to the CLI usage exit code.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

}  // namespace netdesign
