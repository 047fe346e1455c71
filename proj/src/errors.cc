#include "lfd/errors.h"

namespace lfd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kSingularDecoupling: return "singular-decoupling";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kAffineDependence: return "affine-dependence";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kNotFeedbackLinearizable: return "not-feedback-linearizable";
    case ErrorKind::kDegenerateInput: return "degenerate-input";
    case ErrorKind::kSingularEmbedding: return "singular-embedding";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what),
      kind_(kind) {}

DivergenceError::DivergenceError(double time, const std::string& what)
    : Error(ErrorKind::kDivergence,
            what + " at t=" + std::to_string(time)),
      time_(time) {}

AffineDependenceError::AffineDependenceError(double time,
                                             const std::string& what)
    : Error(ErrorKind::kAffineDependence,
            what + " at t=" + std::to_string(time)),
      time_(time) {}

}  // namespace lfd
