// Copyright 2026 The quditmem Authors
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

#ifndef QUDITMEM_TYPES_HPP
#define QUDITMEM_TYPES_HPP

#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace quditmem {

using Complex = std::complex<double>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using MatrixXc = ComplexMatrix<double>;
using VectorXc = ComplexVector<double>;

/// Bad user-supplied parameters (dimension, ranges, CLI flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical or structural invariant failed at runtime. Indicates a bug or
/// an input that slipped past validation.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// ω^k with ω = e^{2πi/d}. k is reduced mod d first so that equal exponents
/// produce bit-identical values.
template <typename Real = double>
std::complex<Real> root_of_unity(long long k, int d) {
  long long r = k % d;
  if (r < 0) r += d;
  if (r == 0) return {Real(1), Real(0)};
  const Real angle = Real(2) * std::numbers::pi_v<Real> * Real(r) / Real(d);
  return std::polar(Real(1), angle);
}

/// Largest absolute deviation of u†u from the identity.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  const auto n = u.rows();
  if (u.cols() != n) return std::numeric_limits<double>::infinity();
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Dense g = u.adjoint() * u;
  return static_cast<double>((g - Dense::Identity(n, n)).cwiseAbs().maxCoeff());
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return static_cast<double>((h - h.adjoint()).cwiseAbs().maxCoeff());
}

}  // namespace quditmem

#endif  // QUDITMEM_TYPES_HPP
