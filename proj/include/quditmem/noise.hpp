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

#ifndef QUDITMEM_NOISE_HPP
#define QUDITMEM_NOISE_HPP

#include <vector>

#include "quditmem/algebra.hpp"
#include "quditmem/echo.hpp"
#include "quditmem/random.hpp"

namespace quditmem {

struct NoiseModel {
  double sigma_shift = 0.0;   // wrapped-Gaussian width of the shift exponent
  double sigma_phase = 0.0;   // wrapped-Gaussian width of the phase exponent
  double omega_scale = 0.0;   // std-dev of single-site amplitudes
  double lambda_scale = 0.0;  // std-dev of pair amplitudes

  void validate() const;
};

/// Winding cutoff |w| <= 6 in the wrapped sum.
inline constexpr int kWrapWindings = 6;

/// P(k) ∝ Σ_{|w|<=6} exp(-(k + w d)^2 / (2σ^2)) over k in Z_d, normalized.
/// σ = 0 gives the point mass at 0. P(k) == P(d-k) holds bit-for-bit.
std::vector<double> wrapped_gaussian_weights(int d, double sigma);

int sample_wrapped_gaussian(int d, double sigma, Rng& rng);

/// Independent shift and phase exponents, zero global phase.
WeylOp sample_weyl_error(const NoiseModel& model, QuditDim dim, Rng& rng);

/// One hermitized Weyl term per site (exponents from sample_weyl_error,
/// amplitude ~ N(0, omega_scale^2)) and one symmetrized X⊗X term per pair
/// i<j (amplitude ~ N(0, lambda_scale^2)).
ErrorHamiltonian sample_hamiltonian(const NoiseModel& model, int sites, QuditDim dim, Rng& rng);

}  // namespace quditmem

#endif  // QUDITMEM_NOISE_HPP
