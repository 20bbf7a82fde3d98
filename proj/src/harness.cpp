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

#include "quditmem/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "quditmem/echo.hpp"
#include "quditmem/noise.hpp"
#include "quditmem/random.hpp"

namespace quditmem {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled by exactly one worker; callers write results into slot i.
template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

VectorXc basis_vector(int d, int k) {
  VectorXc v = VectorXc::Zero(d);
  v(k) = 1.0;
  return v;
}

NoiseModel noise_of(const ExperimentConfig& c) {
  NoiseModel model;
  model.sigma_shift = c.sigma_shift;
  model.sigma_phase = c.sigma_phase;
  return model;
}

void check_positive_list(const std::vector<double>& xs, const char* what) {
  if (xs.empty()) throw ConfigError(std::string(what) + " must not be empty");
  for (double x : xs) {
    if (!std::isfinite(x) || x <= 0.0) throw ConfigError(std::string(what) + " must be positive");
  }
}

}  // namespace

SubgroupSpec SubgroupSpec::parse(const std::string& text) {
  SubgroupSpec spec;
  if (text == "singleton") {
    spec.kind = Kind::singleton;
  } else if (text == "z") {
    spec.kind = Kind::z;
  } else if (text == "diagonal" || text == "table1") {
    spec.kind = Kind::diagonal;
  } else {
    std::istringstream in(text);
    char comma = 0;
    if (!(in >> spec.m >> comma >> spec.n) || comma != ',' || !in.eof()) {
      throw ConfigError("unrecognized subgroup '" + text +
                        "' (expected singleton, z, diagonal or m,n)");
    }
    if (spec.m < 0 || spec.n < 0) throw ConfigError("subgroup exponents must be non-negative");
    spec.kind = Kind::generator;
  }
  return spec;
}

std::string SubgroupSpec::to_string() const {
  switch (kind) {
    case Kind::singleton: return "singleton";
    case Kind::z: return "z";
    case Kind::diagonal: return "diagonal";
    case Kind::generator: return std::to_string(m) + "," + std::to_string(n);
  }
  return "";
}

CosetTable make_table(const SubgroupSpec& spec, QuditDim dim) {
  switch (spec.kind) {
    case SubgroupSpec::Kind::singleton:
      return build_cosets(StabilizerSubgroup::trivial(dim));
    case SubgroupSpec::Kind::z:
      return build_cosets(StabilizerSubgroup::cyclic(dim, 0, 1));
    case SubgroupSpec::Kind::diagonal:
      return diagonal_table(dim);
    case SubgroupSpec::Kind::generator:
      return build_cosets(StabilizerSubgroup::cyclic(dim, spec.m, spec.n));
  }
  throw ConfigError("unknown subgroup kind");
}

void ExperimentConfig::validate() const {
  QuditDim dim(d);
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  NoiseModel model = noise_of(*this);
  model.validate();
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0, 1)");
  qft_plan(d).validate();
  for (int sd : sweep) {
    if (sd < 2) throw ConfigError("sweep dimensions must be >= 2");
    qft_plan(sd).validate();
  }
  check_positive_list(echo_times, "echo times");
  if (!std::isfinite(echo_omega) || !std::isfinite(echo_transverse)) {
    throw ConfigError("echo strengths must be finite");
  }
  if (trotter_steps < 1) throw ConfigError("trotter steps must be >= 1");
  check_positive_list(fisher_times, "fisher times");
  if (!(fisher_t2 > 0.0) || !(fisher_step > 0.0) || !std::isfinite(fisher_theta)) {
    throw ConfigError("fisher T2 and step must be positive and theta finite");
  }
  for (double e : fisher_epsilons) {
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("fisher epsilons must lie in [0, 1)");
  }
}

QftPlan ExperimentConfig::qft_plan(int dim) const {
  QftPlan plan = QftPlan::defaults(dim);
  if (k) plan.k = *k;
  plan.epsilon = epsilon;
  return plan;
}

// ---- cycle -----------------------------------------------------------------

CycleRecord memory_cycle(const ExperimentConfig& config, const CosetTable& table,
                         const CorrectionPlan& plan, const VectorXc& psi, const WeylOp& error,
                         Rng& rng, int trial) {
  const QuditDim dim(config.d);
  constexpr int kData = 0, kShift = 1, kPhase = 2;
  const VectorXc zero = basis_vector(config.d, 0);
  const VectorXc factors[] = {psi, zero, zero};
  StateVector state = product_state(factors);
  state = extract_syndrome(state, kData, kShift, kPhase, error);

  const QftPlan qft = config.qft_plan();
  AdaptiveResult shift = adaptive_qft(state, kShift, qft, rng);
  AdaptiveResult phase = adaptive_qft(shift.state, kPhase, qft, rng);
  state = std::move(phase.state);

  const int label = table.classify(WeylOp(dim, shift.syndrome, phase.syndrome));
  const int ancillas[] = {kShift, kPhase};
  state = apply_correction(state, ancillas, kData, plan);

  const double fid = fidelity_with_pure(reduced_density_matrix(state, kData), psi.normalized());
  const long long cost = shift.cost.gate_cost() + phase.cost.gate_cost();
  if (fid > 1.0 + 1e-9 || cost <= 0) {
    throw InvariantViolation("cycle trial " + std::to_string(trial) + " violates conservation");
  }
  const bool escalated = shift.cost.escalated || phase.cost.escalated;
  return {trial,
          error.m(),
          error.n(),
          label,
          escalated ? QftStage::full : QftStage::coarse,
          cost,
          fid,
          fid >= kCorrectedThreshold};
}

CycleRecord run_cycle_trial(const ExperimentConfig& config, const CosetTable& table,
                            const CorrectionPlan& plan, int trial) {
  Rng rng = trial_rng(config.seed, static_cast<std::uint64_t>(trial));
  const VectorXc psi = random_site_state(config.d, rng);
  const WeylOp error = sample_weyl_error(noise_of(config), QuditDim(config.d), rng);
  return memory_cycle(config, table, plan, psi, error, rng, trial);
}

std::vector<CycleRecord> run_cycle(const ExperimentConfig& config) {
  config.validate();
  const CosetTable table = make_table(config.subgroup, QuditDim(config.d));
  const CorrectionPlan plan = plan_correction(table);
  std::vector<CycleRecord> records(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](int t) {
    records[static_cast<std::size_t>(t)] = run_cycle_trial(config, table, plan, t);
  });
  return records;
}

CsvTable cycle_csv(const std::vector<CycleRecord>& records) {
  CsvTable csv({"trial", "error_m", "error_n", "syndrome", "stage", "gate_cost", "fidelity_after",
                "corrected"});
  for (const auto& r : records) {
    csv.add_row({std::to_string(r.trial), std::to_string(r.error_m), std::to_string(r.error_n),
                 std::to_string(r.syndrome), to_string(r.stage), std::to_string(r.gate_cost),
                 format_double(r.fidelity_after), r.corrected ? "true" : "false"});
  }
  return csv;
}

CycleSummary summarize(const std::vector<CycleRecord>& records) {
  if (records.empty()) throw ConfigError("summarize: no records");
  CycleSummary s{0.0, 1.0, 0.0, 0.0, 0.0};
  for (const auto& r : records) {
    s.mean_fidelity += r.fidelity_after;
    s.min_fidelity = std::min(s.min_fidelity, r.fidelity_after);
    s.corrected_rate += r.corrected ? 1.0 : 0.0;
    s.escalation_rate += r.stage == QftStage::full ? 1.0 : 0.0;
    s.mean_gate_cost += static_cast<double>(r.gate_cost);
  }
  const double n = static_cast<double>(records.size());
  s.mean_fidelity /= n;
  s.corrected_rate /= n;
  s.escalation_rate /= n;
  s.mean_gate_cost /= n;
  return s;
}

// ---- qft-bench -------------------------------------------------------------

double analytic_escalation_rate(const QftPlan& plan, double sigma_shift) {
  plan.validate();
  const auto w = wrapped_gaussian_weights(plan.d, sigma_shift);
  std::vector<double> p(plan.d, 0.0);
  double rate = 0.0;
  for (int m = 0; m < plan.d; ++m) {
    std::fill(p.begin(), p.end(), 0.0);
    p[m] = 1.0;
    if (!(coarse_mass(plan, p) >= 1.0 - plan.epsilon - 1e-12 && coarse_mass(plan, p) > 0.0)) {
      rate += w[m];
    }
  }
  return rate;
}

std::vector<QftBenchRow> run_qft_bench(const ExperimentConfig& config) {
  config.validate();
  const std::vector<int> dims = config.sweep.empty() ? std::vector<int>{config.d} : config.sweep;
  std::vector<QftBenchRow> rows;
  for (int d : dims) {
    const QftPlan plan = config.qft_plan(d);
    const MatrixXc f = full_qft_matrix(d);
    const std::uint64_t seed = splitmix64(config.seed) ^ static_cast<std::uint64_t>(d);
    std::vector<CostReport> reports(static_cast<std::size_t>(config.trials));
    parallel_for(config.trials, config.threads, [&](int t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      const int m = sample_wrapped_gaussian(d, config.sigma_shift, rng);
      const VectorXc reg_state[] = {f * basis_vector(d, m)};
      reports[static_cast<std::size_t>(t)] = adaptive_qft(product_state(reg_state), 0, plan, rng).cost;
    });
    const CostSummary s = expected_cost(reports);
    rows.push_back({d, plan.k, plan.epsilon, s.mean_cost, full_qft_cost(d), s.p_small,
                    analytic_escalation_rate(plan, config.sigma_shift)});
  }
  return rows;
}

CsvTable qft_bench_csv(const std::vector<QftBenchRow>& rows) {
  CsvTable csv({"d", "k", "epsilon", "mean_cost", "full_cost", "escalation_rate"});
  for (const auto& r : rows) {
    csv.add_row({std::to_string(r.d), std::to_string(r.k), format_double(r.epsilon),
                 format_double(r.mean_cost), std::to_string(r.full_cost),
                 format_double(r.escalation_rate)});
  }
  return csv;
}

// ---- echo-verify -----------------------------------------------------------

const char* to_string(EchoStatus s) {
  switch (s) {
    case EchoStatus::ok: return "ok";
    case EchoStatus::exact_cancellation: return "exact_cancellation";
    case EchoStatus::degenerate: return "degenerate";
    case EchoStatus::insufficient_separation: return "insufficient_separation";
  }
  return "";
}

// 1 - |<a|b>|^2 as the squared norm of b's component orthogonal to a, which
// keeps relative precision when the infidelity is tiny.
double infidelity(const StateVector& a, const StateVector& b) {
  const VectorXc& va = a.amplitudes();
  const VectorXc& vb = b.amplitudes();
  return (vb - va.dot(vb) * va).squaredNorm();
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("log_log_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("log_log_slope: abscissae coincide");
  return (n * sxy - sx * sy) / denom;
}

EchoReport echo_scaling(const MatrixXc& h, const PulseSequence& seq, const StateVector& initial,
                        const std::vector<double>& times, int trotter_steps) {
  EchoReport report;
  const PulseSequence free = PulseSequence::identity(initial.reg(), 1);
  std::vector<double> tf, yf, te, ye;
  double max_free = 0.0, max_echo = 0.0;
  for (double t : times) {
    const double free_inf = infidelity(initial, evolve_echo(initial, h, free, t, 1));
    const double echo_inf = infidelity(initial, evolve_echo(initial, h, seq, t, trotter_steps));
    report.rows.push_back({t, free_inf, echo_inf});
    max_free = std::max(max_free, free_inf);
    max_echo = std::max(max_echo, echo_inf);
    if (free_inf > kFitFloor) {
      tf.push_back(t);
      yf.push_back(free_inf);
    }
    if (echo_inf > kFitFloor) {
      te.push_back(t);
      ye.push_back(echo_inf);
    }
  }
  const bool free_flat = max_free < kInfidelityFloor || tf.size() < 2;
  const bool echo_flat = max_echo < kInfidelityFloor || te.size() < 2;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.slope_free = free_flat ? nan : log_log_slope(tf, yf);
  report.slope_echo = echo_flat ? nan : log_log_slope(te, ye);
  if (free_flat) {
    report.status = EchoStatus::degenerate;
  } else if (echo_flat) {
    report.status = EchoStatus::exact_cancellation;
  } else if (report.slope_echo - report.slope_free >= kRequiredSlopeSeparation) {
    report.status = EchoStatus::ok;
  } else {
    report.status = EchoStatus::insufficient_separation;
  }
  return report;
}

EchoReport run_echo_verify(const ExperimentConfig& config) {
  config.validate();
  const QuditDim dim(config.d);
  const Register reg({config.d});
  ErrorHamiltonian h(reg);
  h.add(0, WeylOp::phase(dim), config.echo_omega);
  h.add(0, WeylOp::shift(dim), config.echo_omega * config.echo_transverse);
  const PulseSequence seq = config.echo_sequence == EchoSequenceKind::twirl
                                ? PulseSequence::weyl_twirl(reg)
                                : PulseSequence::cyclic_shift(reg);
  const VectorXc plus[] = {full_qft_matrix(config.d).col(0)};
  return echo_scaling(h.matrix(), seq, product_state(plus), config.echo_times, config.trotter_steps);
}

CsvTable echo_csv(const EchoReport& report) {
  CsvTable csv({"t", "infidelity_free", "infidelity_echo"});
  for (const auto& r : report.rows) {
    csv.add_row({format_double(r.t), format_double(r.infidelity_free),
                 format_double(r.infidelity_echo)});
  }
  return csv;
}

// ---- fisher ----------------------------------------------------------------

double accumulated_phase_signal(int d, double theta, double t, double t2) {
  VectorXc psi(d);
  for (int k = 0; k < d; ++k) psi(k) = std::polar(1.0 / std::sqrt(double(d)), theta * t * k);
  const MatrixXc x = matrix(WeylOp::shift(QuditDim(d)));
  const MatrixXc observable = 0.5 * (x + x.adjoint());
  const VectorXc factors[] = {psi};
  return std::exp(-t / t2) * expectation(product_state(factors), 0, observable);
}

double classified_bin_mean(const QftPlan& plan, double theta, bool adaptive) {
  const int d = plan.d;
  VectorXc psi(d);
  for (int k = 0; k < d; ++k) {
    psi(k) = std::polar(1.0 / std::sqrt(double(d)), 2.0 * std::numbers::pi * theta * k / d);
  }
  const VectorXc spectral = full_qft_matrix(d).adjoint() * psi;
  std::vector<double> p(d);
  for (int j = 0; j < d; ++j) p[j] = std::norm(spectral(j));
  if (adaptive) {
    const double mass = coarse_mass(plan, p);
    if (mass >= 1.0 - plan.epsilon - 1e-12 && mass > 0.0) {
      double mean = 0.0;
      for (int j = 0; j < plan.k; ++j) {
        const double w = window_weight(plan, j);
        mean += j * w * w * p[j];
      }
      return mean / mass;
    }
  }
  double mean = 0.0;
  for (int j = 0; j < d; ++j) mean += j * p[j];
  return mean;
}

FisherGapRow fisher_gap(const QftPlan& plan, double theta, double step) {
  plan.validate();
  const double full = fisher_information(
      [&](double th) { return classified_bin_mean(plan, th, false); }, theta, step);
  const double adaptive = fisher_information(
      [&](double th) { return classified_bin_mean(plan, th, true); }, theta, step);
  return {plan.k, plan.epsilon, full, adaptive, full - adaptive};
}

FisherReport run_fisher_trend(const ExperimentConfig& config) {
  config.validate();
  FisherReport report;
  const int d = config.d;
  const double t_readout = config.fisher_times.front();
  const double projective = fisher_information(
      [&](double th) { return accumulated_phase_signal(d, th, t_readout, config.fisher_t2); },
      config.fisher_theta, config.fisher_step);
  for (double t : config.fisher_times) {
    const double nd = fisher_information(
        [&](double th) { return accumulated_phase_signal(d, th, t, config.fisher_t2); },
        config.fisher_theta, config.fisher_step);
    report.trend.push_back({t, projective, nd});
  }
  report.knee_t = report.trend.back().t;
  for (std::size_t i = 0; i + 1 < report.trend.size(); ++i) {
    if (report.trend[i + 1].fisher_nd < report.trend[i].fisher_nd) {
      report.knee_t = report.trend[i].t;
      break;
    }
  }
  report.monotone_within_t2 = true;
  for (std::size_t i = 0; i + 1 < report.trend.size(); ++i) {
    if (report.trend[i + 1].t > config.fisher_t2) break;
    if (report.trend[i + 1].fisher_nd < report.trend[i].fisher_nd) report.monotone_within_t2 = false;
  }
  for (double eps : config.fisher_epsilons) {
    QftPlan plan = config.qft_plan();
    plan.epsilon = eps;
    report.gaps.push_back(fisher_gap(plan, config.fisher_theta, config.fisher_step));
  }
  return report;
}

CsvTable fisher_csv(const FisherReport& report) {
  CsvTable csv({"kind", "param", "fisher_a", "fisher_b", "gap"});
  for (const auto& r : report.trend) {
    csv.add_row({"trend", format_double(r.t), format_double(r.fisher_projective),
                 format_double(r.fisher_nd), format_double(r.fisher_nd - r.fisher_projective)});
  }
  for (const auto& g : report.gaps) {
    csv.add_row({"epsilon", format_double(g.epsilon), format_double(g.fisher_full),
                 format_double(g.fisher_adaptive), format_double(g.gap)});
  }
  return csv;
}

}  // namespace quditmem
