#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace nfsic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Default ridge added to the covariance estimate before the SPD solve.
inline constexpr double kDefaultGamma = 1e-8;

// Invalid arguments: wrong dimensions, out-of-range flags, bad sizes.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structurally valid input that carries no usable signal (e.g. all
// pairwise distances zero in the median heuristic).
struct DegenerateInputError : InputError {
  using InputError::InputError;
};

// The regularized covariance could not be factorized even after the
// gamma fallback.
struct SingularCovarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external data (CSV and friends).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nfsic
