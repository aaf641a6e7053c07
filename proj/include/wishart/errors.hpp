#pragma once

#include <stdexcept>
#include <string>

namespace wishart {

/// Invalid parameters or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for numerical failures. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation too close to the branch point t - tau_tilde x = 0.
class SingularPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite integrand sample or failed tail bound.
class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// <L_{2k-1}, L_{2k-2}>_1 vanishes at this t; the skew-orthogonal
/// polynomials do not exist there and the caller should move the node.
class DegenerateSkewProduct : public NumericalError {
 public:
  DegenerateSkewProduct(const std::string& what, int k, double magnitude)
      : NumericalError(what), k_(k), magnitude_(magnitude) {}
  int k() const noexcept { return k_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  int k_;
  double magnitude_;
};

}  // namespace wishart
