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

#include "quditmem/echo.hpp"

#include <cmath>
#include <numbers>

#include "quditmem/fourier.hpp"

namespace quditmem {

namespace {

using Index = Eigen::Index;

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatrixXc lift_many(const Register& reg, const std::vector<std::pair<int, const MatrixXc*>>& ops) {
  MatrixXc out = MatrixXc::Identity(1, 1);
  for (int s = 0; s < reg.sites(); ++s) {
    const MatrixXc* factor = nullptr;
    for (const auto& [site, op] : ops) {
      if (site == s) factor = op;
    }
    const int d = reg.dim(s);
    if (factor != nullptr && (factor->rows() != d || factor->cols() != d)) {
      throw ConfigError("lift: operator dimension does not match site " + std::to_string(s));
    }
    out = kron(out, factor ? *factor : MatrixXc::Identity(d, d));
  }
  return out;
}

// Diagonal ladder on (control, target): |j>|k> -> exp(2πi·sign·G·jk/d).
StateVector phase_ladder(const StateVector& state, int control, int target, double strength,
                         int sign) {
  const int d = state.reg().dim(target);
  const int dc = state.reg().dim(control);
  std::map<int, MatrixXc> branches;
  for (int j = 1; j < dc; ++j) {
    MatrixXc u = MatrixXc::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * sign * strength * j * k / d;
      u(k, k) = std::polar(1.0, angle);
    }
    branches.emplace(j, std::move(u));
  }
  return apply_controlled(state, control, target, branches);
}

StateVector fourier_frame_ladder(const StateVector& state, int data, int anc, double strength,
                                 int sign, const MatrixXc& f) {
  StateVector s = apply_site_unitary(state, data, f.adjoint());
  s = phase_ladder(s, data, anc, strength, sign);
  return apply_site_unitary(s, data, f);
}

StateVector extraction_circuit(const StateVector& state, int data, int shift_anc, int phase_anc,
                               const WeylOp& error, const AncillaCoupling& coupling) {
  const int d = state.reg().dim(data);
  const double g = coupling.integral();
  const MatrixXc f = full_qft_matrix(d);
  StateVector s = apply_site_unitary(state, shift_anc, f);
  s = apply_site_unitary(s, phase_anc, f);
  s = phase_ladder(s, data, shift_anc, g, -1);
  s = fourier_frame_ladder(s, data, phase_anc, g, -1, f);
  s = apply_site_unitary(s, data, matrix(error));
  s = fourier_frame_ladder(s, data, phase_anc, g, +1, f);
  return phase_ladder(s, data, shift_anc, g, +1);
}

// ||[S, P]||_F where P is a Weyl operator acting on `site` of `reg`; P is a
// phased permutation, so both products are index shuffles.
double commutator_with_weyl(const MatrixXc& s, const Register& reg, int site, const WeylOp& op) {
  const Index n = static_cast<Index>(reg.size());
  std::vector<Index> image(n);
  std::vector<Complex> phase(n);
  const std::size_t stride = reg.stride(site);
  for (Index c = 0; c < n; ++c) {
    const int label = reg.label(static_cast<std::size_t>(c), site);
    const auto [to, exponent] = apply_to_basis(op, label);
    image[c] = c + static_cast<Index>((static_cast<long long>(to) - label) * static_cast<long long>(stride));
    phase[c] = root_of_unity(exponent, op.d());
  }
  // (S P)(r, c) = S(r, image[c]) phase[c];  (P S)(image[r'], c) = phase[r'] S(r', c)
  MatrixXc diff = MatrixXc::Zero(n, n);
  for (Index c = 0; c < n; ++c) diff.col(c) = s.col(image[c]) * phase[c];
  for (Index r = 0; r < n; ++r) diff.row(image[r]) -= phase[r] * s.row(r);
  return diff.norm();
}

}  // namespace

ErrorHamiltonian& ErrorHamiltonian::add(int site, const WeylOp& op, double amplitude) {
  if (reg_.dim(site) != op.d()) throw ConfigError("ErrorHamiltonian: term dimension mismatch");
  single_.push_back({site, op, amplitude});
  return *this;
}

ErrorHamiltonian& ErrorHamiltonian::add_pair(int site_a, int site_b, const WeylOp& op_a,
                                             const WeylOp& op_b, double amplitude) {
  if (site_a == site_b) throw ConfigError("ErrorHamiltonian: pair term needs two distinct sites");
  if (reg_.dim(site_a) != op_a.d() || reg_.dim(site_b) != op_b.d()) {
    throw ConfigError("ErrorHamiltonian: pair term dimension mismatch");
  }
  pairs_.push_back({site_a, site_b, op_a, op_b, amplitude});
  return *this;
}

MatrixXc ErrorHamiltonian::matrix() const {
  const Index n = static_cast<Index>(reg_.size());
  MatrixXc h = MatrixXc::Zero(n, n);
  for (const auto& t : single_) {
    if (t.amplitude == 0.0) continue;
    const MatrixXc l = lift(reg_, t.site, quditmem::matrix(t.op));
    h += 0.5 * t.amplitude * (l + l.adjoint());
  }
  for (const auto& t : pairs_) {
    if (t.amplitude == 0.0) continue;
    const MatrixXc l =
        lift_pair(reg_, t.site_a, quditmem::matrix(t.op_a), t.site_b, quditmem::matrix(t.op_b));
    h += 0.5 * t.amplitude * (l + l.adjoint());
  }
  return h;
}

MatrixXc lift(const Register& reg, int site, const MatrixXc& op) {
  reg.check_site(site);
  return lift_many(reg, {{site, &op}});
}

MatrixXc lift_pair(const Register& reg, int site_a, const MatrixXc& op_a, int site_b,
                   const MatrixXc& op_b) {
  reg.check_site(site_a);
  reg.check_site(site_b);
  if (site_a == site_b) throw ConfigError("lift_pair: sites must differ");
  return lift_many(reg, {{site_a, &op_a}, {site_b, &op_b}});
}

void PulseSequence::validate(std::size_t dim) const {
  if (pulses.empty()) throw ConfigError("pulse sequence is empty");
  for (const auto& p : pulses) {
    if (static_cast<std::size_t>(p.rows()) != dim || static_cast<std::size_t>(p.cols()) != dim) {
      throw ConfigError("pulse dimension does not match the Hamiltonian");
    }
    if (unitarity_defect(p) > kUnitaryTolerance) throw ConfigError("pulse is not unitary");
  }
}

PulseSequence PulseSequence::from_weyl(const Register& reg, const std::vector<WeylOp>& ops) {
  PulseSequence seq;
  for (const auto& op : ops) {
    MatrixXc full = MatrixXc::Identity(1, 1);
    for (int s = 0; s < reg.sites(); ++s) {
      if (reg.dim(s) != op.d()) throw ConfigError("from_weyl: register is not uniform in dimension");
      full = kron(full, matrix(op));
    }
    seq.pulses.push_back(std::move(full));
  }
  return seq;
}

PulseSequence PulseSequence::cyclic_shift(const Register& reg) {
  QuditDim dim(reg.dim(0));
  std::vector<WeylOp> ops;
  for (int k = 0; k < dim.value(); ++k) ops.push_back(WeylOp::shift(dim, k));
  return from_weyl(reg, ops);
}

PulseSequence PulseSequence::weyl_twirl(const Register& reg) {
  QuditDim dim(reg.dim(0));
  std::vector<WeylOp> ops;
  // Snake order over b: consecutive blocks run X^a forwards then backwards.
  // Lexicographic order would pair each toggled Hamiltonian with its negative
  // in mirror position and cancel to all orders at d = 2.
  for (int b = 0; b < dim.value(); ++b) {
    for (int i = 0; i < dim.value(); ++i) {
      const int a = b % 2 == 0 ? i : dim.value() - 1 - i;
      ops.emplace_back(dim, a, b);
    }
  }
  return from_weyl(reg, ops);
}

PulseSequence PulseSequence::identity(const Register& reg, std::size_t count) {
  PulseSequence seq;
  const Index n = static_cast<Index>(reg.size());
  seq.pulses.assign(count, MatrixXc::Identity(n, n));
  return seq;
}

AncillaCoupling AncillaCoupling::unit(int segments) {
  if (segments < 1) throw ConfigError("AncillaCoupling: need at least one segment");
  AncillaCoupling c;
  c.segment_duration = 1.0 / segments;
  c.g_profile.assign(segments, 1.0);
  return c;
}

double AncillaCoupling::integral() const {
  double total = 0.0;
  for (double g : g_profile) total += g * segment_duration;
  if (!std::isfinite(total)) throw ConfigError("AncillaCoupling: coupling integral is not finite");
  return total;
}

MatrixXc average_hamiltonian(const MatrixXc& h, const PulseSequence& seq) {
  seq.validate(static_cast<std::size_t>(h.rows()));
  MatrixXc avg = MatrixXc::Zero(h.rows(), h.cols());
  for (const auto& p : seq.pulses) avg += p.adjoint() * h * p;
  avg /= static_cast<double>(seq.size());
  return avg;
}

MatrixXc average_hamiltonian(const ErrorHamiltonian& h, const PulseSequence& seq) {
  return average_hamiltonian(h.matrix(), seq);
}

MatrixXc hermitian_propagator(const MatrixXc& h, double t) {
  if (hermiticity_defect(h) > kHermitianTolerance) {
    throw ConfigError("hermitian_propagator: Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h);
  if (eig.info() != Eigen::Success) throw InvariantViolation("eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  VectorXc phases(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

StateVector evolve_echo(const StateVector& state, const MatrixXc& h, const PulseSequence& seq,
                        double total_time, int trotter_steps) {
  if (trotter_steps < 1) throw ConfigError("evolve_echo: trotter_steps must be >= 1");
  if (!(total_time >= 0.0)) throw ConfigError("evolve_echo: total_time must be non-negative");
  if (static_cast<std::size_t>(h.rows()) != state.reg().size()) {
    throw ConfigError("evolve_echo: Hamiltonian dimension does not match the register");
  }
  seq.validate(state.reg().size());
  const double tau = total_time / (static_cast<double>(trotter_steps) * seq.size());
  const MatrixXc segment = hermitian_propagator(h, tau);

  MatrixXc cycle = MatrixXc::Identity(h.rows(), h.cols());
  for (const auto& p : seq.pulses) cycle = p.adjoint() * segment * p * cycle;

  VectorXc psi = state.amplitudes();
  for (int step = 0; step < trotter_steps; ++step) psi = cycle * psi;
  return {state.reg(), std::move(psi)};
}

StateVector evolve_echo(const StateVector& state, const ErrorHamiltonian& h,
                        const PulseSequence& seq, double total_time, int trotter_steps) {
  if (!(h.reg() == state.reg())) throw ConfigError("evolve_echo: register mismatch");
  return evolve_echo(state, h.matrix(), seq, total_time, trotter_steps);
}

StateVector extract_syndrome(const StateVector& state, int data_site, int shift_anc_site,
                             int phase_anc_site, const WeylOp& error,
                             const AncillaCoupling& coupling) {
  const Register& reg = state.reg();
  const int d = reg.dim(data_site);
  if (reg.dim(shift_anc_site) != d || reg.dim(phase_anc_site) != d || error.d() != d) {
    throw ConfigError("extract_syndrome: data, ancillas and error must share one dimension");
  }
  if (data_site == shift_anc_site || data_site == phase_anc_site || shift_anc_site == phase_anc_site) {
    throw ConfigError("extract_syndrome: sites must be distinct");
  }
  for (int anc : {shift_anc_site, phase_anc_site}) {
    if (marginal_probabilities(state, anc)[0] < 1.0 - 1e-10) {
      throw ConfigError("extract_syndrome: ancilla site " + std::to_string(anc) + " is not in |0>");
    }
  }
  return extraction_circuit(state, data_site, shift_anc_site, phase_anc_site, error, coupling);
}

MatrixXc extraction_unitary(QuditDim dim, const WeylOp& error) {
  const int d = dim.value();
  Register reg({d, d, d});
  const Index n = static_cast<Index>(reg.size());
  const AncillaCoupling coupling = AncillaCoupling::unit();
  MatrixXc u(n, n);
  for (Index c = 0; c < n; ++c) {
    VectorXc e = VectorXc::Zero(n);
    e(c) = 1.0;
    u.col(c) = extraction_circuit(StateVector(reg, std::move(e)), 0, 1, 2, error, coupling).amplitudes();
  }
  return u;
}

CommutatorNorms snd_commutator_norms(QuditDim dim, const WeylOp& error, ObservableSlot slot) {
  const int d = dim.value();
  Register reg({d, d, d});
  const MatrixXc u = extraction_unitary(dim, error);
  const int site = slot == ObservableSlot::data ? 0 : slot == ObservableSlot::shift_ancilla ? 1 : 2;
  // O = diag(0..d-1) on `site`, so O·U scales rows by the site label.
  MatrixXc ou = u;
  for (Index r = 0; r < ou.rows(); ++r) ou.row(r) *= static_cast<double>(reg.label(r, site));
  const MatrixXc s = u.adjoint() * ou;
  return {commutator_with_weyl(s, reg, 0, WeylOp::shift(dim)),
          commutator_with_weyl(s, reg, 0, WeylOp::phase(dim))};
}

CommutatorNorms snd_commutator_norms(int d, ObservableSlot slot) {
  QuditDim dim(d);
  CommutatorNorms worst{0.0, 0.0};
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const auto norms = snd_commutator_norms(dim, WeylOp(dim, m, n), slot);
      worst.with_shift = std::max(worst.with_shift, norms.with_shift);
      worst.with_phase = std::max(worst.with_phase, norms.with_phase);
    }
  }
  return worst;
}

double fisher_information(const std::function<double(double)>& expectation_of, double theta,
                          double step) {
  if (!(step > 0.0)) throw ConfigError("fisher_information: step must be positive");
  const double plus = expectation_of(theta + step);
  const double minus = expectation_of(theta - step);
  if (!std::isfinite(plus) || !std::isfinite(minus)) {
    throw InvariantViolation("fisher_information: non-finite expectation");
  }
  const double slope = (plus - minus) / (2.0 * step);
  return 4.0 * slope * slope;
}

double fisher_information(const std::function<StateVector(double)>& family, int site,
                          const MatrixXc& observable, double theta, double step) {
  return fisher_information(
      [&](double t) { return expectation(family(t), site, observable); }, theta, step);
}

}  // namespace quditmem
