// Error taxonomy shared by all modules.

#ifndef KODAIRA_ERRORS_HPP
#define KODAIRA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kodaira {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally invalid input (dimension mismatch, index out of range, ...).
struct RejectedInput : Error {
  explicit RejectedInput(const std::string& msg) : Error(msg) {}
};

/// Scalar function applied outside its domain (log of a non-positive value, ...).
struct SingularInput : Error {
  explicit SingularInput(const std::string& msg) : Error(msg) {}
};

/// A matrix factorization or inversion failed its conditioning gate.
struct ConditioningError : Error {
  double rcond_estimate;
  ConditioningError(const std::string& msg, double rcond)
      : Error(msg + " (rcond estimate " + std::to_string(rcond) + ")"),
        rcond_estimate(rcond) {}
};

/// Random sample landed on the excluded measure-zero set (resultant vanishes, ...).
struct DegenerateSample : Error {
  explicit DegenerateSample(const std::string& msg) : Error(msg) {}
};

/// Experiment asked for a geometric regime that is not implemented.
struct UnsupportedRegime : Error {
  explicit UnsupportedRegime(const std::string& msg) : Error(msg) {}
};

/// Integrand produced a non-finite value at a quadrature node.
struct EvaluationError : Error {
  explicit EvaluationError(const std::string& msg) : Error(msg) {}
};

/// Configuration file failed schema validation.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace kodaira

#endif
