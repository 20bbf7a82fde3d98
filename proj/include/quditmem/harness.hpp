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

// Experiment runners behind the qmem CLI. Every runner is deterministic in
// its config: trial t draws from trial_rng(seed, t) and results are ordered
// by trial index whatever the thread count.

#ifndef QUDITMEM_HARNESS_HPP
#define QUDITMEM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quditmem/correction.hpp"
#include "quditmem/echo.hpp"
#include "quditmem/fourier.hpp"
#include "quditmem/report.hpp"

namespace quditmem {

struct SubgroupSpec {
  enum class Kind { singleton, z, diagonal, generator };
  Kind kind = Kind::z;
  int m = 0;
  int n = 1;

  /// "singleton", "z", "diagonal" (the Table-1 style transversal over <Z>)
  /// or "m,n" for <X^m Z^n>.
  static SubgroupSpec parse(const std::string& text);
  std::string to_string() const;
};

CosetTable make_table(const SubgroupSpec& spec, QuditDim dim);

enum class EchoSequenceKind { cyclic, twirl };

struct ExperimentConfig {
  int d = 5;
  int trials = 100;
  std::uint64_t seed = 42;
  double sigma_shift = 0.6;
  double sigma_phase = 0.6;
  std::optional<int> k;  // defaults to ceil(log2 d), capped at d
  double epsilon = 0.05;
  SubgroupSpec subgroup;
  std::string output_path;
  int threads = 1;

  // qft-bench
  std::vector<int> sweep;  // empty: just d

  // echo-verify
  double echo_omega = 1.0;       // dephasing strength Ω
  double echo_transverse = 0.5;  // transverse term relative to Ω
  EchoSequenceKind echo_sequence = EchoSequenceKind::twirl;
  std::vector<double> echo_times{0.01, 0.02, 0.04, 0.08};
  int trotter_steps = 1;

  // fisher
  double fisher_theta = 0.3;
  double fisher_t2 = 1.0;
  double fisher_step = 1e-4;
  std::vector<double> fisher_times{0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> fisher_epsilons{0.0, 0.01, 0.05, 0.1, 0.2, 0.5};

  void validate() const;
  QftPlan qft_plan(int dim) const;
  QftPlan qft_plan() const { return qft_plan(d); }
};

struct CycleRecord {
  int trial;
  int error_m;
  int error_n;
  int syndrome;
  QftStage stage;
  long long gate_cost;
  double fidelity_after;
  bool corrected;
};

inline constexpr double kCorrectedThreshold = 1.0 - 1e-9;

/// Full memory cycle per trial: random data state, sampled Weyl error inside
/// the extraction window, adaptive classification of both ancillas, coset
/// lookup, controlled correction, fidelity against the pristine state.
std::vector<CycleRecord> run_cycle(const ExperimentConfig& config);
CycleRecord run_cycle_trial(const ExperimentConfig& config, const CosetTable& table,
                            const CorrectionPlan& plan, int trial);
/// One cycle for a given data state and error; `rng` drives the ancilla
/// readouts only.
CycleRecord memory_cycle(const ExperimentConfig& config, const CosetTable& table,
                         const CorrectionPlan& plan, const VectorXc& psi, const WeylOp& error,
                         Rng& rng, int trial = 0);

CsvTable cycle_csv(const std::vector<CycleRecord>& records);

struct CycleSummary {
  double mean_fidelity;
  double min_fidelity;
  double corrected_rate;
  double escalation_rate;
  double mean_gate_cost;
};
CycleSummary summarize(const std::vector<CycleRecord>& records);

struct QftBenchRow {
  int d;
  int k;
  double epsilon;
  double mean_cost;
  long long full_cost;
  double escalation_rate;
  double analytic_escalation;  // wrapped-Gaussian mass of shifts outside [0, K)
};

/// Shift errors drawn with sigma_shift, prepared as Fourier phase registers
/// F|m>, classified with the adaptive QFT.
std::vector<QftBenchRow> run_qft_bench(const ExperimentConfig& config);
CsvTable qft_bench_csv(const std::vector<QftBenchRow>& rows);

/// Analytic escalation probability for a pure phase register F|m> with m
/// wrapped-Gaussian: Σ_m w(m) [windowed mass of bin m < 1 - epsilon].
double analytic_escalation_rate(const QftPlan& plan, double sigma_shift);

enum class EchoStatus { ok, exact_cancellation, degenerate, insufficient_separation };
const char* to_string(EchoStatus s);

struct EchoRow {
  double t;
  double infidelity_free;
  double infidelity_echo;
};

struct EchoReport {
  std::vector<EchoRow> rows;
  double slope_free = 0.0;  // NaN when the free curve is below the floor
  double slope_echo = 0.0;  // NaN when the echo curve is below the floor
  EchoStatus status = EchoStatus::degenerate;
};

/// A curve whose largest infidelity is below kInfidelityFloor counts as
/// flat. Fits use every point above kFitFloor.
inline constexpr double kInfidelityFloor = 1e-14;
inline constexpr double kFitFloor = 1e-28;
inline constexpr double kRequiredSlopeSeparation = 1.5;

/// Single data qudit in F|0> under H = Ω (Z + Z†)/2 + κΩ (X + X†)/2, with
/// and without the refocusing sequence; log-log least-squares slopes of
/// infidelity against T.
EchoReport run_echo_verify(const ExperimentConfig& config);
EchoReport echo_scaling(const MatrixXc& h, const PulseSequence& seq, const StateVector& initial,
                        const std::vector<double>& times, int trotter_steps);
CsvTable echo_csv(const EchoReport& report);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct FisherTrendRow {
  double t;
  double fisher_projective;  // readout window fixed at the first sweep time
  double fisher_nd;          // accumulated over t, visibility exp(-t/T2)
};

struct FisherGapRow {
  int k;
  double epsilon;
  double fisher_full;
  double fisher_adaptive;
  double gap;  // full - adaptive
};

struct FisherReport {
  std::vector<FisherTrendRow> trend;
  std::vector<FisherGapRow> gaps;
  double knee_t;              // first local maximum of fisher_nd
  bool monotone_within_t2;    // fisher_nd non-decreasing over t <= T2
};

/// Expectation of X_herm for the accumulated phase register
/// Σ_k e^{iθtk}|k>/√d, scaled by the visibility exp(-t/T2).
double accumulated_phase_signal(int d, double theta, double t, double t2);

/// Mean classified frequency bin of the phase register Σ_k e^{2πiθk/d}|k>/√d
/// under full readout, or under the adaptive rule (conditional mean over the
/// window when the windowed mass reaches 1 - epsilon).
double classified_bin_mean(const QftPlan& plan, double theta, bool adaptive);

FisherReport run_fisher_trend(const ExperimentConfig& config);
FisherGapRow fisher_gap(const QftPlan& plan, double theta, double step);
CsvTable fisher_csv(const FisherReport& report);

}  // namespace quditmem

#endif  // QUDITMEM_HARNESS_HPP
