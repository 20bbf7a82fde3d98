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

// Coset decomposition of the projective Weyl group E ≅ Z_d × Z_d by a
// stabilizer subgroup H, and the controlled correction built from it.
// All group logic here ignores global phase.

#ifndef QUDITMEM_CORRECTION_HPP
#define QUDITMEM_CORRECTION_HPP

#include <span>
#include <vector>

#include "quditmem/algebra.hpp"
#include "quditmem/report.hpp"
#include "quditmem/statevec.hpp"

namespace quditmem {

class StabilizerSubgroup {
 public:
  /// Closure of the generators under composition.
  static StabilizerSubgroup generated_by(QuditDim dim, const std::vector<WeylOp>& generators);
  /// Takes an explicit element list; throws ConfigError unless it is closed
  /// and contains the identity.
  static StabilizerSubgroup from_elements(QuditDim dim, const std::vector<WeylOp>& elements);
  static StabilizerSubgroup trivial(QuditDim dim) { return generated_by(dim, {}); }
  /// <X^m Z^n>
  static StabilizerSubgroup cyclic(QuditDim dim, int m, int n) {
    return generated_by(dim, {WeylOp(dim, m, n)});
  }

  QuditDim dim() const { return dim_; }
  const std::vector<WeylOp>& generators() const { return generators_; }
  /// Elements with zero phase, sorted by (m, n).
  const std::vector<WeylOp>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const WeylOp& op) const;

 private:
  StabilizerSubgroup(QuditDim dim, std::vector<WeylOp> generators, std::vector<bool> member);

  QuditDim dim_;
  std::vector<WeylOp> generators_;
  std::vector<WeylOp> elements_;
  std::vector<bool> member_;  // indexed m*d + n
};

enum class TransversalKind { canonical, diagonal_table };

struct CosetRow {
  int label;
  WeylOp representative;
  WeylOp correction;  // projective inverse of the representative
};

class CosetTable {
 public:
  /// Validates that the representatives form a transversal of H: one per
  /// coset, covering all d^2 errors. Labels must be 0..rows-1 in order.
  CosetTable(StabilizerSubgroup subgroup, std::vector<CosetRow> rows, TransversalKind kind);

  QuditDim dim() const { return subgroup_.dim(); }
  const StabilizerSubgroup& subgroup() const { return subgroup_; }
  const std::vector<CosetRow>& rows() const { return rows_; }
  TransversalKind kind() const { return kind_; }
  std::size_t size() const { return rows_.size(); }

  int classify(const WeylOp& error) const;
  const CosetRow& row(int label) const { return rows_.at(label); }

 private:
  StabilizerSubgroup subgroup_;
  std::vector<CosetRow> rows_;
  TransversalKind kind_;
  std::vector<int> label_of_;  // indexed m*d + n
};

/// Partition by H with the lexicographically least (m, n) of each coset as
/// representative; labels follow representative order.
CosetTable build_cosets(const StabilizerSubgroup& subgroup);

/// The diagonal syndrome table over H = <Z>: row i carries X^{i+1} Z^i.
/// The family i = 0..d-1 is a transversal of <Z>. For d >= 4 the last two
/// members are listed in swapped order so that label d-1 carries
/// X^{d-1} Z^{d-2} and label d-2 carries Z^{d-1}.
CosetTable diagonal_table(QuditDim dim);

inline int classify(const WeylOp& error, const CosetTable& table) { return table.classify(error); }

/// syndrome,rep_m,rep_n,corr_m,corr_n; labels ascending.
CsvTable coset_table_csv(const CosetTable& table);

struct CorrectionBranch {
  int syndrome;
  MatrixXc unitary;
};

struct CorrectionPlan {
  int d = 0;
  std::vector<CorrectionBranch> branches;
  /// Coset label for each extracted exponent pair, indexed a*d + b.
  std::vector<int> label_of_syndrome;

  const MatrixXc* branch(int label) const;
};

/// One branch per coset: the correction matrix, or identity when the
/// representative lies in H.
CorrectionPlan plan_correction(const CosetTable& table);

/// Σ_s |s><s| ⊗ U_s on the data site. With one ancilla site its value is the
/// coset label; with two (shift, phase) the pair (a, b) is decoded through
/// plan.label_of_syndrome.
StateVector apply_correction(const StateVector& state, std::span<const int> syndrome_anc_sites,
                             int data_site, const CorrectionPlan& plan);

}  // namespace quditmem

#endif  // QUDITMEM_CORRECTION_HPP
