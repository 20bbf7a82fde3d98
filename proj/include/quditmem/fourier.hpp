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

// Qudit Fourier transform, its K-bin truncation and the adaptive two-stage
// syndrome classifier.
//
// Cost accounting (controlled-phase gates, the only gates counted towards
// the reported cost):
//   full transform      d(d-1)/2
//   coarse K-bin stage  ceil(log2 d) * K
//   escalated readout   coarse + full
// single_site_count is informational: K for the coarse stage, d for the full.

#ifndef QUDITMEM_FOURIER_HPP
#define QUDITMEM_FOURIER_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "quditmem/algebra.hpp"
#include "quditmem/random.hpp"
#include "quditmem/statevec.hpp"
#include "quditmem/types.hpp"

namespace quditmem {

enum class TruncationWindow { hard_cutoff, raised_cosine };

struct QftPlan {
  int d = 2;
  int k = 1;
  double epsilon = 0.05;
  TruncationWindow window = TruncationWindow::hard_cutoff;

  /// K = ceil(log2 d), epsilon = 0.05, hard cutoff.
  static QftPlan defaults(int d);
  void validate() const;
};

enum class QftStage { coarse, full };

inline const char* to_string(QftStage s) { return s == QftStage::coarse ? "coarse" : "full"; }

struct CostReport {
  long long controlled_phase_count = 0;
  long long single_site_count = 0;
  bool escalated = false;
  QftStage stage = QftStage::coarse;

  long long gate_cost() const { return controlled_phase_count; }
};

int ceil_log2(int d);
long long full_qft_cost(int d);
long long coarse_qft_cost(int d, int k);

/// F|j> = d^{-1/2} Σ_k e^{2πijk/d} |k>.
template <typename Real = double>
ComplexMatrix<Real> full_qft_matrix(int d) {
  QuditDim dim(d);
  ComplexMatrix<Real> f(d, d);
  const Real scale = Real(1) / std::sqrt(Real(d));
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) f(k, j) = scale * root_of_unity<Real>(static_cast<long long>(j) * k, d);
  }
  return f;
}

/// F X^m F†. Diagonal with entries e^{2πimk/d}.
template <typename Real = double>
ComplexMatrix<Real> conjugate_shift(int d, int m) {
  if (m < 0 || m >= d) throw ConfigError("conjugate_shift: shift exponent outside [0, d)");
  const ComplexMatrix<Real> f = full_qft_matrix<Real>(d);
  return f * matrix<Real>(WeylOp::shift(QuditDim(d), m)) * f.adjoint();
}

/// Per-bin amplitude weight w(k) of the truncation window; the truncated
/// transform uses f(j,k) = e^{2πijk/d} w(k).
double window_weight(const QftPlan& plan, int k);

/// F_{d,ε}: rows of F scaled by the window. With the hard cutoff this is
/// Π_K F.
template <typename Real = double>
ComplexMatrix<Real> truncated_qft_matrix(const QftPlan& plan) {
  plan.validate();
  ComplexMatrix<Real> f = full_qft_matrix<Real>(plan.d);
  for (int k = 0; k < plan.d; ++k) f.row(k) *= Real(window_weight(plan, k));
  return f;
}

/// Discarded high-frequency sum δ = Σ_{k=K}^{d-1} e^{2πik Δj/d}, summed term
/// by term.
Complex truncation_error(int d, int k, long long delta_j);

struct AdaptiveResult {
  int syndrome;
  CostReport cost;
  StateVector state;  // ancilla collapsed onto the measured frequency bin
  double coarse_mass;
};

/// Two-stage classification of the phase register held on `anc_site`.
/// Applies F† to the ancilla, then reads the window-weighted mass of the
/// first K bins. If that mass is at least 1 - epsilon the bin is sampled
/// within the window (coarse stage); otherwise all d bins are measured
/// (escalation).
AdaptiveResult adaptive_qft(const StateVector& state, int anc_site, const QftPlan& plan, Rng& rng);

/// Window-weighted mass of the first K bins for a probability vector over
/// frequency bins.
double coarse_mass(const QftPlan& plan, std::span<const double> bin_probabilities);

struct CostSummary {
  double mean_cost;
  double p_small;  // escalation probability
};

CostSummary expected_cost(std::span<const CostReport> trials);

}  // namespace quditmem

#endif  // QUDITMEM_FOURIER_HPP
