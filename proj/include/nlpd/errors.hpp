#pragma once

#include <stdexcept>
#include <string>

namespace nlpd {

/// Invalid parameters, malformed configuration or violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A grid cannot resolve the requested horizon (delta < 2h).
class ResolutionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Infeasible admissible set, e.g. kappa_lo * |Omega| > V.
class InfeasibleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Iterative solver stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlpd
