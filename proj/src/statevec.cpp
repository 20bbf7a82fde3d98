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

#include "quditmem/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "quditmem/report.hpp"

namespace quditmem {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kZeroMarginal = 1e-15;

using Index = Eigen::Index;

void check_unitary(const MatrixXc& u, int expected_dim, const char* who) {
  if (u.rows() != expected_dim || u.cols() != expected_dim) {
    throw ConfigError(std::string(who) + ": expected " + std::to_string(expected_dim) + "x" +
                      std::to_string(expected_dim) + " matrix, got " + std::to_string(u.rows()) +
                      "x" + std::to_string(u.cols()));
  }
  if (unitarity_defect(u) > kUnitaryTolerance) {
    throw ConfigError(std::string(who) + ": matrix is not unitary");
  }
}

// Visits every fibre along `site`: calls fn(base) where base is the flat
// index with label 0 at `site`; the fibre is base + k*stride for k < dim.
template <typename Fn>
void for_each_fibre(const Register& reg, int site, Fn&& fn) {
  const std::size_t stride = reg.stride(site);
  const std::size_t block = stride * static_cast<std::size_t>(reg.dim(site));
  for (std::size_t outer = 0; outer < reg.size(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) fn(outer + inner);
  }
}

}  // namespace

Register::Register(std::vector<int> dims, std::size_t cap) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ConfigError("register needs at least one site");
  for (int d : dims_) {
    if (d < 2) throw ConfigError("site dimension must be >= 2, got " + std::to_string(d));
    if (size_ > cap / static_cast<std::size_t>(d)) {
      throw ConfigError("register exceeds the amplitude cap of " + std::to_string(cap));
    }
    size_ *= static_cast<std::size_t>(d);
  }
  strides_.assign(dims_.size(), 1);
  for (int s = sites() - 2; s >= 0; --s) {
    strides_[s] = strides_[s + 1] * static_cast<std::size_t>(dims_[s + 1]);
  }
}

int Register::dim(int site) const {
  check_site(site);
  return dims_[site];
}

void Register::check_site(int site) const {
  if (site < 0 || site >= sites()) {
    throw ConfigError("site " + std::to_string(site) + " outside register of " +
                      std::to_string(sites()) + " sites");
  }
}

std::size_t Register::flatten(std::span<const int> labels) const {
  if (static_cast<int>(labels.size()) != sites()) {
    throw ConfigError("expected " + std::to_string(sites()) + " labels, got " +
                      std::to_string(labels.size()));
  }
  std::size_t index = 0;
  for (int s = 0; s < sites(); ++s) {
    if (labels[s] < 0 || labels[s] >= dims_[s]) {
      throw ConfigError("label " + std::to_string(labels[s]) + " out of range for site " +
                        std::to_string(s) + " (dimension " + std::to_string(dims_[s]) + ")");
    }
    index += static_cast<std::size_t>(labels[s]) * strides_[s];
  }
  return index;
}

StateVector::StateVector(Register reg, VectorXc amplitudes)
    : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != reg_.size()) {
    throw ConfigError("amplitude count " + std::to_string(amps_.size()) +
                      " does not match register size " + std::to_string(reg_.size()));
  }
  if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
    throw InvariantViolation("state is not normalized (norm " + format_double(amps_.norm()) + ")");
  }
}

StateVector StateVector::normalized(Register reg, VectorXc amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("cannot normalize a zero vector");
  amplitudes /= n;
  return {std::move(reg), std::move(amplitudes)};
}

StateVector basis_state(const Register& reg, std::span<const int> labels) {
  VectorXc amps = VectorXc::Zero(static_cast<Index>(reg.size()));
  amps(static_cast<Index>(reg.flatten(labels))) = 1.0;
  return {reg, std::move(amps)};
}

StateVector product_state(std::span<const VectorXc> factors) {
  std::vector<int> dims;
  for (const auto& f : factors) dims.push_back(static_cast<int>(f.size()));
  Register reg(std::move(dims));
  VectorXc amps = VectorXc::Ones(1);
  for (const auto& f : factors) {
    const double n = f.norm();
    if (!(n > 0.0)) throw ConfigError("product_state: zero factor");
    VectorXc next(amps.size() * f.size());
    for (Index i = 0; i < amps.size(); ++i) next.segment(i * f.size(), f.size()) = amps(i) * f / n;
    amps = std::move(next);
  }
  return StateVector::normalized(std::move(reg), std::move(amps));
}

VectorXc random_site_state(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXc v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

StateVector apply_site_unitary(const StateVector& state, int site, const MatrixXc& u) {
  const Register& reg = state.reg();
  const int d = reg.dim(site);
  check_unitary(u, d, "apply_site_unitary");
  const std::size_t stride = reg.stride(site);
  VectorXc out = state.amplitudes();
  VectorXc fibre(d);
  for_each_fibre(reg, site, [&](std::size_t base) {
    for (int k = 0; k < d; ++k) fibre(k) = out(static_cast<Index>(base + k * stride));
    const VectorXc mapped = u * fibre;
    for (int k = 0; k < d; ++k) out(static_cast<Index>(base + k * stride)) = mapped(k);
  });
  return {reg, std::move(out)};
}

StateVector apply_controlled(const StateVector& state, std::span<const int> control_sites,
                             int target_site, const BranchSelector& select) {
  const Register& reg = state.reg();
  const int d = reg.dim(target_site);
  for (int c : control_sites) {
    reg.check_site(c);
    if (c == target_site) throw ConfigError("apply_controlled: control site equals target site");
  }
  const std::size_t stride = reg.stride(target_site);
  std::unordered_set<const MatrixXc*> checked;
  std::vector<int> labels(control_sites.size());
  VectorXc out = state.amplitudes();
  VectorXc fibre(d);
  for_each_fibre(reg, target_site, [&](std::size_t base) {
    for (std::size_t i = 0; i < control_sites.size(); ++i) labels[i] = reg.label(base, control_sites[i]);
    const MatrixXc* u = select(labels);
    if (u == nullptr) return;
    if (checked.insert(u).second) check_unitary(*u, d, "apply_controlled");
    for (int k = 0; k < d; ++k) fibre(k) = out(static_cast<Index>(base + k * stride));
    const VectorXc mapped = (*u) * fibre;
    for (int k = 0; k < d; ++k) out(static_cast<Index>(base + k * stride)) = mapped(k);
  });
  return {reg, std::move(out)};
}

StateVector apply_controlled(const StateVector& state, int control_site, int target_site,
                             const std::map<int, MatrixXc>& branches) {
  const int controls[] = {control_site};
  return apply_controlled(state, controls, target_site,
                          [&branches](std::span<const int> labels) -> const MatrixXc* {
                            auto it = branches.find(labels[0]);
                            return it == branches.end() ? nullptr : &it->second;
                          });
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (!(a.reg() == b.reg())) throw ConfigError("fidelity: register mismatch");
  const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
  return std::min(f, 1.0);
}

std::vector<double> marginal_probabilities(const StateVector& state, int site) {
  const Register& reg = state.reg();
  std::vector<double> p(reg.dim(site), 0.0);
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    p[reg.label(i, site)] += std::norm(amps(static_cast<Index>(i)));
  }
  return p;
}

StateVector project_site(const StateVector& state, int site, int outcome) {
  const Register& reg = state.reg();
  if (outcome < 0 || outcome >= reg.dim(site)) throw ConfigError("project_site: outcome out of range");
  VectorXc out = state.amplitudes();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg.label(i, site) != outcome) out(static_cast<Index>(i)) = 0.0;
  }
  const double n = out.norm();
  if (n * n < kZeroMarginal) {
    throw InvariantViolation("project_site: outcome " + std::to_string(outcome) +
                             " has zero probability");
  }
  out /= n;
  return {reg, std::move(out)};
}

Measurement measure_site(const StateVector& state, int site, Rng& rng) {
  const auto p = marginal_probabilities(state, site);
  double total = 0.0;
  for (double x : p) total += x;
  const double u = uniform01(rng) * total;
  int outcome = static_cast<int>(p.size()) - 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    cumulative += p[k];
    if (u < cumulative) {
      outcome = static_cast<int>(k);
      break;
    }
  }
  // Rounding can leave u past the last non-empty bin.
  while (outcome > 0 && p[outcome] == 0.0) --outcome;
  if (p[outcome] < kZeroMarginal) {
    throw InvariantViolation("measure_site: sampled outcome has zero marginal");
  }
  return {outcome, project_site(state, site, outcome)};
}

double expectation(const StateVector& state, int site, const MatrixXc& observable) {
  const Register& reg = state.reg();
  const int d = reg.dim(site);
  if (observable.rows() != d || observable.cols() != d) {
    throw ConfigError("expectation: observable dimension mismatch");
  }
  if (hermiticity_defect(observable) > kHermitianTolerance) {
    throw ConfigError("expectation: observable is not Hermitian");
  }
  const MatrixXc rho = reduced_density_matrix(state, site);
  const Complex value = (rho * observable).trace();
  if (std::abs(value.imag()) > kHermitianTolerance) {
    throw InvariantViolation("expectation: imaginary residue " + format_double(value.imag()));
  }
  return value.real();
}

MatrixXc reduced_density_matrix(const StateVector& state, int site) {
  const Register& reg = state.reg();
  const int d = reg.dim(site);
  const std::size_t stride = reg.stride(site);
  const auto& amps = state.amplitudes();
  MatrixXc rho = MatrixXc::Zero(d, d);
  VectorXc fibre(d);
  for_each_fibre(reg, site, [&](std::size_t base) {
    for (int k = 0; k < d; ++k) fibre(k) = amps(static_cast<Index>(base + k * stride));
    rho.noalias() += fibre * fibre.adjoint();
  });
  return rho;
}

double fidelity_with_pure(const MatrixXc& rho, const VectorXc& phi) {
  if (rho.rows() != phi.size()) throw ConfigError("fidelity_with_pure: dimension mismatch");
  const double f = phi.dot(rho * phi).real();
  return std::clamp(f, 0.0, 1.0);
}

void write_state_dump(std::ostream& out, const StateVector& state, double cutoff) {
  const auto& amps = state.amplitudes();
  for (Index i = 0; i < amps.size(); ++i) {
    const Complex a = amps(i);
    if (a == Complex(0.0, 0.0) || std::abs(a) <= cutoff) continue;
    out << i << '\t' << format_double(a.real()) << '\t' << format_double(a.imag()) << '\n';
  }
}

StateVector read_state_dump(std::istream& in, const Register& reg) {
  VectorXc amps = VectorXc::Zero(static_cast<Index>(reg.size()));
  std::string line;
  long long previous = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long index = 0;
    double re = 0.0, im = 0.0;
    if (!(fields >> index >> re >> im)) throw ConfigError("state dump: malformed line '" + line + "'");
    if (index <= previous || index >= static_cast<long long>(reg.size())) {
      throw ConfigError("state dump: index " + std::to_string(index) + " out of order or range");
    }
    amps(static_cast<Index>(index)) = Complex(re, im);
    previous = index;
  }
  return {reg, std::move(amps)};
}

}  // namespace quditmem
