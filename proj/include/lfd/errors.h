#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfd {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes.
enum class ErrorKind {
  kInvalidDimension,
  kInvalidArgument,
  kDomain,
  kSingularDecoupling,
  kNumerical,
  kDivergence,
  kAffineDependence,
  kRange,
  kNotFeedbackLinearizable,
  kDegenerateInput,
  kSingularEmbedding,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a simulated state becomes non-finite, leaves the plant
/// domain, or exceeds the divergence bound.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what);

  double time() const { return time_; }

 private:
  double time_;
};

/// Z(t) lost rank (or conditioning) at the reported time.
class AffineDependenceError : public Error {
 public:
  AffineDependenceError(double time, const std::string& what);

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace lfd
