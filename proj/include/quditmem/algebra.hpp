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

// Weyl–Heisenberg group over Z_d.
//
// An element is ω^p · X^m Z^n in normal order (shifts left of phases), with
//   X|j> = |j+1 mod d>,  Z|j> = ω^j |j>,  ω = e^{2πi/d},
// so that Z X = ω X Z. All three exponents are kept reduced mod d, which
// keeps the group law exact: no floating point enters until matrix().

#ifndef QUDITMEM_ALGEBRA_HPP
#define QUDITMEM_ALGEBRA_HPP

#include <compare>
#include <string>
#include <utility>

#include "quditmem/types.hpp"

namespace quditmem {

class QuditDim {
 public:
  explicit QuditDim(int d);

  int value() const { return d_; }
  int reduce(long long k) const {
    long long r = k % d_;
    return static_cast<int>(r < 0 ? r + d_ : r);
  }

  friend bool operator==(QuditDim, QuditDim) = default;

 private:
  int d_;
};

class WeylOp {
 public:
  WeylOp(QuditDim dim, long long m, long long n, long long p = 0)
      : dim_(dim), m_(dim.reduce(m)), n_(dim.reduce(n)), p_(dim.reduce(p)) {}

  static WeylOp identity(QuditDim dim) { return {dim, 0, 0, 0}; }
  static WeylOp shift(QuditDim dim, long long m = 1) { return {dim, m, 0, 0}; }
  static WeylOp phase(QuditDim dim, long long n = 1) { return {dim, 0, n, 0}; }

  QuditDim dim() const { return dim_; }
  int d() const { return dim_.value(); }
  int m() const { return m_; }
  int n() const { return n_; }
  int p() const { return p_; }

  bool is_identity() const { return m_ == 0 && n_ == 0 && p_ == 0; }
  bool is_projective_identity() const { return m_ == 0 && n_ == 0; }

  /// Exact equality: same dimension and all three exponents.
  friend bool operator==(const WeylOp&, const WeylOp&) = default;

  std::string to_string() const;

 private:
  QuditDim dim_;
  int m_;
  int n_;
  int p_;
};

/// Equality up to global phase.
inline bool projectively_equal(const WeylOp& a, const WeylOp& b) {
  return a.dim() == b.dim() && a.m() == b.m() && a.n() == b.n();
}

/// Normal-ordered product a·b:
///   (m1,n1,p1)(m2,n2,p2) = (m1+m2, n1+n2, p1+p2+n1·m2).
/// Throws ConfigError on dimension mismatch.
WeylOp compose(const WeylOp& a, const WeylOp& b);

/// Exact inverse, including the compensating phase: compose(a, inverse(a))
/// is (0,0,0).
WeylOp inverse(const WeylOp& a);

/// a^k for k >= 0.
WeylOp power(const WeylOp& a, long long k);

/// Action on a computational basis state: X^m Z^n |j> = ω^{p+jn} |j+m>.
/// Returns (target index, phase exponent). Throws std::out_of_range for
/// j outside [0, d).
std::pair<int, int> apply_to_basis(const WeylOp& a, int j);

/// Dense d×d realization. Column j holds ω^{p+jn} in row j+m mod d.
template <typename Real = double>
ComplexMatrix<Real> matrix(const WeylOp& a) {
  const int d = a.d();
  ComplexMatrix<Real> u = ComplexMatrix<Real>::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const auto [row, phase] = apply_to_basis(a, j);
    u(row, j) = root_of_unity<Real>(phase, d);
  }
  return u;
}

}  // namespace quditmem

#endif  // QUDITMEM_ALGEBRA_HPP
