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

// Refocusing sequences, average-Hamiltonian analysis and the non-demolition
// syndrome extraction circuit.

#ifndef QUDITMEM_ECHO_HPP
#define QUDITMEM_ECHO_HPP

#include <functional>
#include <vector>

#include "quditmem/algebra.hpp"
#include "quditmem/statevec.hpp"
#include "quditmem/types.hpp"

namespace quditmem {

struct SingleSiteTerm {
  int site;
  WeylOp op;
  double amplitude;
};

struct PairTerm {
  int site_a;
  int site_b;
  WeylOp op_a;
  WeylOp op_b;
  double amplitude;
};

/// Static error Hamiltonian
///   H = Σ_i Ω_i (T_i + T_i†)/2 + Σ_{i<j} Λ_ij (Γ_ij + Γ_ij†)/2,
/// with each T_i a single-site Weyl operator and Γ_ij a two-site product.
class ErrorHamiltonian {
 public:
  explicit ErrorHamiltonian(Register reg) : reg_(std::move(reg)) {}

  ErrorHamiltonian& add(int site, const WeylOp& op, double amplitude);
  ErrorHamiltonian& add_pair(int site_a, int site_b, const WeylOp& op_a, const WeylOp& op_b,
                             double amplitude);

  const Register& reg() const { return reg_; }
  const std::vector<SingleSiteTerm>& single_site_terms() const { return single_; }
  const std::vector<PairTerm>& pair_terms() const { return pairs_; }

  MatrixXc matrix() const;

 private:
  Register reg_;
  std::vector<SingleSiteTerm> single_;
  std::vector<PairTerm> pairs_;
};

/// Embeds single-site operators into the full register (identity elsewhere).
MatrixXc lift(const Register& reg, int site, const MatrixXc& op);
MatrixXc lift_pair(const Register& reg, int site_a, const MatrixXc& op_a, int site_b,
                   const MatrixXc& op_b);

/// Refocusing schedule in the toggling frame. Segment k of a cycle evolves
/// under P_k† H P_k for segment_duration; the pulses actually played between
/// segments are P_{k+1} P_k†, and a full cycle multiplies to the identity.
struct PulseSequence {
  std::vector<MatrixXc> pulses;
  double segment_duration = 0.0;

  std::size_t size() const { return pulses.size(); }
  void validate(std::size_t dim) const;

  /// The same Weyl pulse on every site, one entry per listed operator.
  static PulseSequence from_weyl(const Register& reg, const std::vector<WeylOp>& ops);
  /// {X^k}, k = 0..d-1, on every site.
  static PulseSequence cyclic_shift(const Register& reg);
  /// {X^a Z^b} over all d^2 pairs on every site, b outer, a snaking
  /// (ascending for even b, descending for odd b).
  static PulseSequence weyl_twirl(const Register& reg);
  static PulseSequence identity(const Register& reg, std::size_t count);
};

/// Ancilla coupling profile g(t), piecewise constant over equal segments.
struct AncillaCoupling {
  std::vector<double> g_profile;
  double segment_duration = 1.0;

  /// Constant profile with unit integral over `segments` segments.
  static AncillaCoupling unit(int segments = 1);
  double integral() const;
};

/// First-order average Hamiltonian (1/N) Σ_k P_k† H P_k.
MatrixXc average_hamiltonian(const MatrixXc& h, const PulseSequence& seq);
MatrixXc average_hamiltonian(const ErrorHamiltonian& h, const PulseSequence& seq);

/// exp(-i H t) for Hermitian H via eigendecomposition.
MatrixXc hermitian_propagator(const MatrixXc& h, double t);

/// Runs `trotter_steps` cycles of the sequence over total_time; each
/// segment lasts total_time / (trotter_steps * |seq|).
StateVector evolve_echo(const StateVector& state, const MatrixXc& h, const PulseSequence& seq,
                        double total_time, int trotter_steps);
StateVector evolve_echo(const StateVector& state, const ErrorHamiltonian& h,
                        const PulseSequence& seq, double total_time, int trotter_steps);

/// Memory window with non-demolition syndrome extraction.
///
/// Both ancillas are prepared in the Fourier state F|0>. Two controlled-phase
/// ladders (|j>|k> -> e^{2πi G jk/d} |j>|k>, G = ∫g dt) couple the data
/// site to the ancillas: the shift ladder in the computational frame, the
/// phase ladder in the Fourier frame of the data (data conjugated by F†,
/// ladder, un-conjugated). The error acts between the inverse ladders and the
/// ladders, so each ancilla picks up only the change the error made:
///   E|ψ> ⊗ F|α> ⊗ F|β>   for E = X^α Z^β.
/// Applying F† to an ancilla then reads its exponent in the computational
/// basis. Expects `state` to hold the data before the error window and both
/// ancillas in |0>.
StateVector extract_syndrome(const StateVector& state, int data_site, int shift_anc_site,
                             int phase_anc_site, const WeylOp& error,
                             const AncillaCoupling& coupling = AncillaCoupling::unit());

/// Dense unitary of the extraction circuit on (data, shift ancilla, phase
/// ancilla) for a fixed error.
MatrixXc extraction_unitary(QuditDim dim, const WeylOp& error);

enum class ObservableSlot { shift_ancilla, phase_ancilla, data };

struct CommutatorNorms {
  double with_shift;  // ||[S_ND, X ⊗ I ⊗ I]||_F
  double with_phase;  // ||[S_ND, Z ⊗ I ⊗ I]||_F
};

/// S_ND = U† O U with O = diag(0..d-1) placed on `slot`; norms of its
/// commutators with the data-site X and Z.
CommutatorNorms snd_commutator_norms(QuditDim dim, const WeylOp& error,
                                     ObservableSlot slot = ObservableSlot::shift_ancilla);
/// Maximum of each norm over all d^2 errors with zero phase exponent.
CommutatorNorms snd_commutator_norms(int d, ObservableSlot slot = ObservableSlot::shift_ancilla);

/// I = 4 (d<O>/dθ)^2 by central differences.
double fisher_information(const std::function<double(double)>& expectation_of, double theta,
                          double step);
double fisher_information(const std::function<StateVector(double)>& family, int site,
                          const MatrixXc& observable, double theta, double step);

}  // namespace quditmem

#endif  // QUDITMEM_ECHO_HPP
