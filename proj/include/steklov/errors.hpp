#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace steklov {

/// Input or admissibility violation (maps to CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

/// Numerical breakdown inside an otherwise valid computation (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  NumericalError(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// det∇φ ≤ 0 somewhere, or ρ(θ) ≤ 0: the shape leaves the admissible class.
struct NonDiffeoError : ValidationError {
  explicit NonDiffeoError(const std::string& msg) : ValidationError("NonDiffeo", msg) {}
};

// Requested index set fails the common-value (width) condition.
struct NotAClusterError : ValidationError {
  explicit NotAClusterError(const std::string& msg) : ValidationError("NotACluster", msg) {}
};

// Requested index set is not separated from the rest of the spectrum.
struct GapViolationError : ValidationError {
  explicit GapViolationError(const std::string& msg) : ValidationError("GapViolation", msg) {}
};

// Finite differencing moved the shape far enough to break the cluster gap.
struct ClusterBrokenError : ValidationError {
  explicit ClusterBrokenError(const std::string& msg) : ValidationError("ClusterBroken", msg) {}
};

// Flow step could not re-enter the admissible class after repeated halving.
struct StepFailureError : ValidationError {
  explicit StepFailureError(const std::string& msg) : ValidationError("StepFailure", msg) {}
};

// Operation received a cluster in the wrong normalization.
struct NormalizationMismatchError : ValidationError {
  explicit NormalizationMismatchError(const std::string& msg)
      : ValidationError("NormalizationMismatch", msg) {}
};

// Malformed config / JSON / CLI arguments.
struct BadInputError : ValidationError {
  explicit BadInputError(const std::string& msg) : ValidationError("BadInput", msg) {}
};

struct NotPositiveDefiniteError : NumericalError {
  explicit NotPositiveDefiniteError(const std::string& msg)
      : NumericalError("NotPositiveDefinite", msg) {}
};

struct ConvergenceFailureError : NumericalError {
  explicit ConvergenceFailureError(const std::string& msg)
      : NumericalError("ConvergenceFailure", msg) {}
};

// Trace Gram matrix of a cluster basis is numerically singular.
struct DegenerateTraceError : NumericalError {
  explicit DegenerateTraceError(const std::string& msg)
      : NumericalError("DegenerateTrace", msg) {}
};

}  // namespace steklov
