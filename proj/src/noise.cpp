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

#include "quditmem/noise.hpp"

#include <cmath>

namespace quditmem {

void NoiseModel::validate() const {
  for (double x : {sigma_shift, sigma_phase, omega_scale, lambda_scale}) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ConfigError("noise widths and scales must be finite and non-negative");
    }
  }
}

std::vector<double> wrapped_gaussian_weights(int d, double sigma) {
  QuditDim dim(d);
  if (!std::isfinite(sigma) || sigma < 0.0) throw ConfigError("sigma must be finite and >= 0");
  std::vector<double> w(d, 0.0);
  if (sigma == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double inv = 1.0 / (2.0 * sigma * sigma);
  auto g = [inv](double x) { return std::exp(-x * x * inv); };
  double total = 0.0;
  for (int k = 0; k < d; ++k) {
    // Signed representative in (-d/2, d/2]; pairing +w with -w makes the
    // sum for k and d-k consist of the same terms in the same order.
    const int r = (2 * k > d) ? k - d : k;
    const double c = std::abs(static_cast<double>(r));
    double s = g(c);
    for (int wind = 1; wind <= kWrapWindings; ++wind) {
      const double shift = static_cast<double>(wind) * d;
      s += g(c + shift) + g(c - shift);
    }
    w[k] = s;
    total += s;
  }
  for (double& x : w) x /= total;
  return w;
}

int sample_wrapped_gaussian(int d, double sigma, Rng& rng) {
  if (sigma == 0.0) return 0;
  const auto w = wrapped_gaussian_weights(d, sigma);
  std::discrete_distribution<int> dist(w.begin(), w.end());
  return dist(rng);
}

WeylOp sample_weyl_error(const NoiseModel& model, QuditDim dim, Rng& rng) {
  model.validate();
  const int m = sample_wrapped_gaussian(dim.value(), model.sigma_shift, rng);
  const int n = sample_wrapped_gaussian(dim.value(), model.sigma_phase, rng);
  return {dim, m, n, 0};
}

ErrorHamiltonian sample_hamiltonian(const NoiseModel& model, int sites, QuditDim dim, Rng& rng) {
  model.validate();
  if (sites < 1) throw ConfigError("sample_hamiltonian: need at least one site");
  ErrorHamiltonian h(Register(std::vector<int>(sites, dim.value())));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < sites; ++s) {
    const WeylOp term = sample_weyl_error(model, dim, rng);
    h.add(s, term, model.omega_scale * normal(rng));
  }
  const WeylOp x = WeylOp::shift(dim);
  for (int i = 0; i < sites; ++i) {
    for (int j = i + 1; j < sites; ++j) h.add_pair(i, j, x, x, model.lambda_scale * normal(rng));
  }
  return h;
}

}  // namespace quditmem
