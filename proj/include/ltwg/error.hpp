#pragma once

#include <stdexcept>
#include <string>

namespace ltwg {

/// Malformed scenario description or CLI input.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Eigensolver failure (non-convergence, inconsistent inertia, ...).
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
  std::string diagnostics_;
};

/// The requested threshold is an eigenvalue to machine precision; the
/// factorization of (A - threshold) has a zero pivot. Retry slightly below.
class ThresholdBreakdown : public SolverError {
public:
  explicit ThresholdBreakdown(double threshold)
      : SolverError("zero pivot in inertia factorization at threshold " +
                    std::to_string(threshold)),
        threshold_(threshold) {}

  double threshold() const noexcept { return threshold_; }

private:
  double threshold_;
};

/// Adaptive quadrature hit its subdivision cap.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace ltwg
