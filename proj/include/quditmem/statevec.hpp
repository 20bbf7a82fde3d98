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

// Dense state-vector simulation over a register of qudits.
//
// Flattening is row-major with site 0 most significant:
//   index = Σ_s label_s · stride_s,  stride_s = Π_{t>s} dim_t.

#ifndef QUDITMEM_STATEVEC_HPP
#define QUDITMEM_STATEVEC_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "quditmem/random.hpp"
#include "quditmem/types.hpp"

namespace quditmem {

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;

class Register {
 public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 20;

  explicit Register(std::vector<int> dims, std::size_t cap = kDefaultCap);

  const std::vector<int>& dims() const { return dims_; }
  int sites() const { return static_cast<int>(dims_.size()); }
  int dim(int site) const;
  std::size_t size() const { return size_; }
  std::size_t stride(int site) const { return strides_.at(site); }

  std::size_t flatten(std::span<const int> labels) const;
  int label(std::size_t index, int site) const {
    return static_cast<int>((index / strides_[site]) % dims_[site]);
  }

  void check_site(int site) const;

  friend bool operator==(const Register& a, const Register& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

class StateVector {
 public:
  /// Takes ownership of the amplitudes; they must already have unit norm
  /// (within 1e-10).
  StateVector(Register reg, VectorXc amplitudes);

  /// Rescales arbitrary non-zero amplitudes to unit norm.
  static StateVector normalized(Register reg, VectorXc amplitudes);

  const Register& reg() const { return reg_; }
  const VectorXc& amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
  double norm() const { return amps_.norm(); }

 private:
  Register reg_;
  VectorXc amps_;
};

StateVector basis_state(const Register& reg, std::span<const int> labels);

/// Tensor product of single-site states, site 0 first. Each factor is
/// normalized independently.
StateVector product_state(std::span<const VectorXc> factors);

/// Haar-like random single-site state: normalized complex Gaussian vector.
VectorXc random_site_state(int d, Rng& rng);

StateVector apply_site_unitary(const StateVector& state, int site, const MatrixXc& u);

/// Selects the target unitary for one assignment of control labels;
/// nullptr means identity.
using BranchSelector = std::function<const MatrixXc*(std::span<const int> control_labels)>;

/// Block-diagonal controlled operation Σ_c |c><c| ⊗ U_c over several control
/// sites acting on one target site.
StateVector apply_controlled(const StateVector& state, std::span<const int> control_sites,
                             int target_site, const BranchSelector& select);

/// Single-control form; branches missing from the map default to identity.
StateVector apply_controlled(const StateVector& state, int control_site, int target_site,
                             const std::map<int, MatrixXc>& branches);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// Born-rule marginal of one site.
std::vector<double> marginal_probabilities(const StateVector& state, int site);

struct Measurement {
  int outcome;
  StateVector state;
};

Measurement measure_site(const StateVector& state, int site, Rng& rng);

/// Collapse onto a given outcome (projective update, renormalized).
StateVector project_site(const StateVector& state, int site, int outcome);

double expectation(const StateVector& state, int site, const MatrixXc& observable);

/// Partial trace down to one site.
MatrixXc reduced_density_matrix(const StateVector& state, int site);

/// <phi|rho|phi> for a normalized pure reference phi.
double fidelity_with_pure(const MatrixXc& rho, const VectorXc& phi);

/// One line per non-zero amplitude, `index<TAB>real<TAB>imag`, 17 significant
/// digits, indices ascending. Amplitudes with modulus <= cutoff are skipped.
void write_state_dump(std::ostream& out, const StateVector& state, double cutoff = 0.0);
StateVector read_state_dump(std::istream& in, const Register& reg);

}  // namespace quditmem

#endif  // QUDITMEM_STATEVEC_HPP
