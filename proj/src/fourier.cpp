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

#include "quditmem/fourier.hpp"

#include <numbers>

namespace quditmem {

namespace {

// Mass comparisons tolerate rounding in F†: a pure bin inside the window
// must pass even at epsilon = 0.
constexpr double kMassSlack = 1e-12;

}  // namespace

QftPlan QftPlan::defaults(int d) {
  QuditDim dim(d);
  QftPlan plan;
  plan.d = d;
  plan.k = std::min(ceil_log2(d), d);
  return plan;
}

void QftPlan::validate() const {
  QuditDim dim(d);
  if (k < 1 || k > d) {
    throw ConfigError("QFT cutoff K must lie in [1, d]; got K=" + std::to_string(k) +
                      " for d=" + std::to_string(d));
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon must lie in [0, 1)");
  }
}

int ceil_log2(int d) {
  if (d < 1) throw ConfigError("ceil_log2: argument must be positive");
  int bits = 0;
  while ((1LL << bits) < d) ++bits;
  return bits;
}

long long full_qft_cost(int d) { return static_cast<long long>(d) * (d - 1) / 2; }

long long coarse_qft_cost(int d, int k) { return static_cast<long long>(ceil_log2(d)) * k; }

double window_weight(const QftPlan& plan, int k) {
  if (k >= plan.k) return 0.0;
  switch (plan.window) {
    case TruncationWindow::hard_cutoff:
      return 1.0;
    case TruncationWindow::raised_cosine:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * k / plan.k));
  }
  return 0.0;
}

Complex truncation_error(int d, int k, long long delta_j) {
  QuditDim dim(d);
  if (k < 1 || k > d) throw ConfigError("truncation_error: K outside [1, d]");
  Complex sum(0.0, 0.0);
  for (int f = k; f < d; ++f) sum += root_of_unity(static_cast<long long>(f) * dim.reduce(delta_j), d);
  return sum;
}

double coarse_mass(const QftPlan& plan, std::span<const double> bin_probabilities) {
  double mass = 0.0;
  for (int k = 0; k < plan.k && k < static_cast<int>(bin_probabilities.size()); ++k) {
    const double w = window_weight(plan, k);
    mass += w * w * bin_probabilities[k];
  }
  return mass;
}

AdaptiveResult adaptive_qft(const StateVector& state, int anc_site, const QftPlan& plan, Rng& rng) {
  plan.validate();
  if (state.reg().dim(anc_site) != plan.d) {
    throw ConfigError("adaptive_qft: ancilla dimension " + std::to_string(state.reg().dim(anc_site)) +
                      " does not match plan dimension " + std::to_string(plan.d));
  }
  const StateVector spectral =
      apply_site_unitary(state, anc_site, full_qft_matrix(plan.d).adjoint());
  const std::vector<double> p = marginal_probabilities(spectral, anc_site);
  const double mass = coarse_mass(plan, p);

  CostReport cost;
  cost.controlled_phase_count = coarse_qft_cost(plan.d, plan.k);
  cost.single_site_count = plan.k;

  if (mass >= 1.0 - plan.epsilon - kMassSlack && mass > 0.0) {
    // Sample the bin from the windowed distribution restricted to [0, K).
    const double u = uniform01(rng) * mass;
    double cumulative = 0.0;
    int bin = -1;
    for (int k = 0; k < plan.k; ++k) {
      const double w = window_weight(plan, k);
      const double weight = w * w * p[k];
      if (weight <= 0.0) continue;
      bin = k;
      cumulative += weight;
      if (u < cumulative) break;
    }
    if (bin < 0) throw InvariantViolation("adaptive_qft: empty coarse window");
    cost.stage = QftStage::coarse;
    return {bin, cost, project_site(spectral, anc_site, bin), mass};
  }

  cost.escalated = true;
  cost.stage = QftStage::full;
  cost.controlled_phase_count += full_qft_cost(plan.d);
  cost.single_site_count += plan.d;
  Measurement m = measure_site(spectral, anc_site, rng);
  return {m.outcome, cost, std::move(m.state), mass};
}

CostSummary expected_cost(std::span<const CostReport> trials) {
  if (trials.empty()) throw ConfigError("expected_cost: no trials");
  double total = 0.0;
  std::size_t escalated = 0;
  for (const auto& t : trials) {
    total += static_cast<double>(t.gate_cost());
    if (t.escalated) ++escalated;
  }
  const double n = static_cast<double>(trials.size());
  return {total / n, static_cast<double>(escalated) / n};
}

}  // namespace quditmem
