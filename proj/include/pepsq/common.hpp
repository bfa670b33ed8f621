// Copyright 2026 The pepsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEPSQ_COMMON_HPP
#define PEPSQ_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pepsq {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
namespace tol {
/// Unitarity / isometry / reconstruction checks on matrices we build.
inline constexpr double kStructural = 1e-10;
/// Candidate vectors with a smaller residual are treated as dependent.
inline constexpr double kLinearDependence = 1e-8;
/// Isometry check for user-supplied tensors (may come from iterative optimizers).
inline constexpr double kUserIsometry = 1e-8;
/// Measurement branches below this probability are dropped.
inline constexpr double kBranchPrune = 1e-14;
}  // namespace tol

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (shape, size, count).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A structural invariant failed (non-unitary input, isometry violation, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The requested combination of modes is not supported.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Largest |entry| of `a - b`.
inline double max_abs_diff(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("max_abs_diff: shape mismatch");
  }
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

/// max |U^dagger U - I|; zero for an isometry with orthonormal columns.
inline double isometry_residual(const Matrix &v) {
  const Matrix gram = v.adjoint() * v;
  return max_abs_diff(gram, Matrix::Identity(v.cols(), v.cols()));
}

inline bool is_isometry(const Matrix &v, double tolerance = tol::kStructural) {
  return v.cols() <= v.rows() && isometry_residual(v) <= tolerance;
}

inline bool is_unitary(const Matrix &u, double tolerance = tol::kStructural) {
  return u.rows() == u.cols() && is_isometry(u, tolerance);
}

}  // namespace pepsq

#endif  // PEPSQ_COMMON_HPP
