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

#include "quditmem/algebra.hpp"

#include <stdexcept>

namespace quditmem {

QuditDim::QuditDim(int d) : d_(d) {
  if (d < 2) {
    throw ConfigError("qudit dimension must be >= 2, got " + std::to_string(d));
  }
}

std::string WeylOp::to_string() const {
  return "w^" + std::to_string(p_) + " X^" + std::to_string(m_) + " Z^" +
         std::to_string(n_) + " (d=" + std::to_string(d()) + ")";
}

WeylOp compose(const WeylOp& a, const WeylOp& b) {
  if (a.dim() != b.dim()) {
    throw ConfigError("compose: dimension mismatch (" + std::to_string(a.d()) +
                      " vs " + std::to_string(b.d()) + ")");
  }
  // Z^{n1} X^{m2} = ω^{n1 m2} X^{m2} Z^{n1}
  const long long phase = static_cast<long long>(a.p()) + b.p() +
                          static_cast<long long>(a.n()) * b.m();
  return {a.dim(), static_cast<long long>(a.m()) + b.m(),
          static_cast<long long>(a.n()) + b.n(), phase};
}

WeylOp inverse(const WeylOp& a) {
  const long long phase = static_cast<long long>(a.n()) * a.m() - a.p();
  return {a.dim(), -static_cast<long long>(a.m()), -static_cast<long long>(a.n()), phase};
}

WeylOp power(const WeylOp& a, long long k) {
  if (k < 0) throw ConfigError("power: negative exponent");
  WeylOp result = WeylOp::identity(a.dim());
  WeylOp base = a;
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    base = compose(base, base);
    k >>= 1;
  }
  return result;
}

std::pair<int, int> apply_to_basis(const WeylOp& a, int j) {
  if (j < 0 || j >= a.d()) {
    throw std::out_of_range("apply_to_basis: index " + std::to_string(j) +
                            " outside [0, " + std::to_string(a.d()) + ")");
  }
  const auto& dim = a.dim();
  return {dim.reduce(static_cast<long long>(j) + a.m()),
          dim.reduce(static_cast<long long>(a.p()) + static_cast<long long>(j) * a.n())};
}

}  // namespace quditmem
