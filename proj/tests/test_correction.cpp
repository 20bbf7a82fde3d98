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

#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "quditmem/correction.hpp"

using namespace quditmem;

namespace {

// Brute-force projective coset of e under <X^b Z^a>: all e + k(b, a) mod d.
std::set<std::pair<int, int>> coset_of(int d, int em, int en, int gm, int gn) {
  std::set<std::pair<int, int>> out;
  for (int k = 0; k < d; ++k) out.insert({(em + k * gm) % d, (en + k * gn) % d});
  return out;
}

std::vector<WeylOp> all_errors(QuditDim dim) {
  std::vector<WeylOp> out;
  for (int m = 0; m < dim.value(); ++m) {
    for (int n = 0; n < dim.value(); ++n) out.emplace_back(dim, m, n);
  }
  return out;
}

StateVector with_syndrome(const VectorXc& data, int d, int a, int b) {
  const VectorXc fs[] = {data, VectorXc::Unit(d, a), VectorXc::Unit(d, b)};
  return product_state(fs);
}

}  // namespace

TEST_CASE("subgroup closure") {
  QuditDim d6(6);
  CHECK(StabilizerSubgroup::trivial(d6).size() == 1);
  CHECK(StabilizerSubgroup::cyclic(d6, 0, 1).size() == 6);
  CHECK(StabilizerSubgroup::cyclic(d6, 2, 0).size() == 3);
  CHECK(StabilizerSubgroup::cyclic(d6, 3, 3).size() == 2);
  const auto h = StabilizerSubgroup::generated_by(d6, {WeylOp(d6, 2, 0), WeylOp(d6, 0, 3)});
  CHECK(h.size() == 6);
  CHECK(h.contains(WeylOp(d6, 4, 3, 5)));
  CHECK_FALSE(h.contains(WeylOp(d6, 1, 0)));
  const auto& el = h.elements();
  for (std::size_t i = 1; i < el.size(); ++i) {
    CHECK(std::pair{el[i - 1].m(), el[i - 1].n()} < std::pair{el[i].m(), el[i].n()});
  }
}

TEST_CASE("explicit element lists are validated") {
  QuditDim d4(4);
  CHECK_THROWS_AS(StabilizerSubgroup::from_elements(d4, {WeylOp(d4, 0, 0), WeylOp(d4, 0, 1)}),
                  ConfigError);
  CHECK_THROWS_AS(StabilizerSubgroup::from_elements(d4, {WeylOp(d4, 0, 2)}), ConfigError);
  const auto ok = StabilizerSubgroup::from_elements(d4, {WeylOp(d4, 0, 0), WeylOp(d4, 0, 2)});
  CHECK(ok.size() == 2);
}

TEST_CASE("singleton subgroup: every error is its own coset") {
  QuditDim d3(3);
  const CosetTable t = build_cosets(StabilizerSubgroup::trivial(d3));
  CHECK(t.size() == 9);
  for (const auto& e : all_errors(d3)) {
    CHECK(projectively_equal(t.row(t.classify(e)).representative, e));
  }
}

TEST_CASE("d=3 cosets of <Z>") {
  QuditDim d3(3);
  const CosetTable t = build_cosets(StabilizerSubgroup::cyclic(d3, 0, 1));
  REQUIRE(t.size() == 3);
  CHECK(t.row(0).representative == WeylOp::identity(d3));
  CHECK(t.row(1).representative == WeylOp::shift(d3, 1));
  CHECK(t.row(2).representative == WeylOp::shift(d3, 2));
  CHECK(t.classify(WeylOp::phase(d3, 1)) == 0);
  CHECK(t.classify(WeylOp::phase(d3, 2)) == 0);
  CHECK(t.classify(WeylOp::identity(d3)) == 0);
  CHECK(classify(WeylOp(d3, 1, 1), t) == classify(WeylOp::shift(d3), t));
}

TEST_CASE("partition over every cyclic subgroup for d <= 7") {
  for (int d = 2; d <= 7; ++d) {
    QuditDim dim(d);
    for (int gm = 0; gm < d; ++gm) {
      for (int gn = 0; gn < d; ++gn) {
        const CosetTable t = build_cosets(StabilizerSubgroup::cyclic(dim, gm, gn));
        // Cover and disjointness: the coset sizes add up to d^2 and each
        // error lands in exactly the brute-force coset of its label.
        std::vector<int> sizes(t.size(), 0);
        bool consistent = true;
        for (const auto& e : all_errors(dim)) {
          const int label = t.classify(e);
          ++sizes[static_cast<std::size_t>(label)];
          const auto& rep = t.row(label).representative;
          consistent = consistent && coset_of(d, rep.m(), rep.n(), gm, gn).count({e.m(), e.n()}) == 1;
        }
        CHECK(consistent);
        int total = 0;
        for (int s : sizes) total += s;
        CHECK(total == d * d);
        const int h = static_cast<int>(coset_of(d, 0, 0, gm, gn).size());
        CHECK(t.size() * h == static_cast<std::size_t>(d * d));
        for (int s : sizes) CHECK(s == h);
        // Representative is the least element of its coset.
        for (const auto& row : t.rows()) {
          const auto c = coset_of(d, row.representative.m(), row.representative.n(), gm, gn);
          CHECK(*c.begin() == std::pair{row.representative.m(), row.representative.n()});
          CHECK(compose(row.correction, row.representative).is_projective_identity());
        }
      }
    }
  }
}

TEST_CASE("coset soundness: residual lies in H") {
  for (int d = 2; d <= 5; ++d) {
    QuditDim dim(d);
    for (int gm = 0; gm < d; ++gm) {
      for (int gn = 0; gn < d; ++gn) {
        const CosetTable t = build_cosets(StabilizerSubgroup::cyclic(dim, gm, gn));
        for (const auto& e : all_errors(dim)) {
          const WeylOp residual = compose(t.row(t.classify(e)).correction, e);
          CHECK(t.subgroup().contains(residual));
        }
      }
    }
    const CosetTable diag = diagonal_table(dim);
    for (const auto& e : all_errors(dim)) {
      CHECK(diag.subgroup().contains(compose(diag.row(diag.classify(e)).correction, e)));
    }
  }
}

TEST_CASE("diagonal table rows") {
  for (int d = 4; d <= 9; ++d) {
    QuditDim dim(d);
    const CosetTable t = diagonal_table(dim);
    REQUIRE(t.size() == static_cast<std::size_t>(d));
    CHECK(t.kind() == TransversalKind::diagonal_table);
    CHECK(projectively_equal(t.row(0).representative, WeylOp(dim, 1, 0)));
    CHECK(projectively_equal(t.row(0).correction, WeylOp(dim, -1, 0)));
    CHECK(projectively_equal(t.row(1).representative, WeylOp(dim, 2, 1)));
    CHECK(projectively_equal(t.row(1).correction, WeylOp(dim, -2, -1)));
    if (d >= 5) {
      // At d = 4, X^3 Z^2 is also the last row's operator and sits there.
      CHECK(projectively_equal(t.row(2).representative, WeylOp(dim, 3, 2)));
      CHECK(projectively_equal(t.row(2).correction, WeylOp(dim, -3, -2)));
    }
    CHECK(projectively_equal(t.row(d - 1).representative, WeylOp(dim, d - 1, d - 2)));
    CHECK(projectively_equal(t.row(d - 1).correction, WeylOp(dim, -(d - 1), -(d - 2))));
    for (int i = 0; i + 2 < d; ++i) {
      CHECK(projectively_equal(t.row(i).representative, WeylOp(dim, i + 1, i)));
    }
    CHECK(projectively_equal(t.row(d - 2).representative, WeylOp(dim, 0, d - 1)));
    for (const auto& row : t.rows()) {
      CHECK(compose(row.correction, row.representative).is_projective_identity());
    }
  }
}

TEST_CASE("table construction rejects bad transversals") {
  QuditDim d3(3);
  const auto h = StabilizerSubgroup::cyclic(d3, 0, 1);
  auto row = [&](int label, int m, int n) {
    const WeylOp rep(d3, m, n);
    return CosetRow{label, rep, inverse(rep)};
  };
  CHECK_NOTHROW(CosetTable(h, {row(0, 0, 0), row(1, 1, 2), row(2, 2, 1)}, TransversalKind::canonical));
  // Two representatives from the same coset.
  CHECK_THROWS_AS(CosetTable(h, {row(0, 0, 0), row(1, 1, 0), row(2, 1, 1)}, TransversalKind::canonical),
                  ConfigError);
  // Wrong row count.
  CHECK_THROWS_AS(CosetTable(h, {row(0, 0, 0), row(1, 1, 0)}, TransversalKind::canonical), ConfigError);
  // Labels out of order.
  CHECK_THROWS_AS(CosetTable(h, {row(1, 0, 0), row(0, 1, 0), row(2, 2, 0)}, TransversalKind::canonical),
                  ConfigError);
  // Correction that does not undo the representative.
  auto bad = row(1, 1, 0);
  bad.correction = WeylOp(d3, 1, 0);
  CHECK_THROWS_AS(CosetTable(h, {row(0, 0, 0), bad, row(2, 2, 0)}, TransversalKind::canonical),
                  ConfigError);
  // |H| must divide d^2: an order-2 subgroup cannot exist at d = 3, but a
  // non-closed set is rejected before that.
  CHECK_THROWS(StabilizerSubgroup::from_elements(d3, {WeylOp(d3, 0, 0), WeylOp(d3, 1, 0)}));
}

TEST_CASE("coset table CSV") {
  const CosetTable t = build_cosets(StabilizerSubgroup::cyclic(QuditDim(3), 0, 1));
  CHECK(coset_table_csv(t).str() ==
        "syndrome,rep_m,rep_n,corr_m,corr_n\n0,0,0,0,0\n1,1,0,2,0\n2,2,0,1,0\n");
}

TEST_CASE("qubit Pauli frame plan") {
  QuditDim d2(2);
  const CorrectionPlan plan = plan_correction(build_cosets(StabilizerSubgroup::trivial(d2)));
  REQUIRE(plan.branches.size() == 4);
  const std::array<std::pair<int, int>, 4> reps{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [m, n] = reps[i];
    const oracle::M inv = oracle::weyl(2, m, n).inverse();
    // Equal up to a global phase.
    const Complex ratio = plan.branches[i].unitary(0, 0) != 0.0
                              ? inv(0, 0) / plan.branches[i].unitary(0, 0)
                              : inv(1, 0) / plan.branches[i].unitary(1, 0);
    CHECK((plan.branches[i].unitary * ratio - inv).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(unitarity_defect(plan.branches[i].unitary) < 1e-13);
  }
}

TEST_CASE("diagonal plan at d=4") {
  QuditDim d4(4);
  const CosetTable t = diagonal_table(d4);
  const CorrectionPlan plan = plan_correction(t);
  const MatrixXc* b1 = plan.branch(1);
  REQUIRE(b1 != nullptr);
  CHECK((*b1 * oracle::weyl(4, 2, 1) - MatrixXc::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
  // Row d-2 holds Z^{d-1}, which lies in <Z>: identity branch.
  CHECK((*plan.branch(2) - MatrixXc::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& b : plan.branches) CHECK(unitarity_defect(b.unitary) < 1e-13);
  CHECK(plan.branch(99) == nullptr);
}

TEST_CASE("zero syndrome leaves the state unchanged") {
  std::mt19937_64 rng(1);
  QuditDim d5(5);
  const CorrectionPlan plan = plan_correction(build_cosets(StabilizerSubgroup::trivial(d5)));
  const StateVector s = with_syndrome(oracle::random_vector(5, rng), 5, 0, 0);
  const std::array<int, 2> anc{1, 2};
  CHECK((apply_correction(s, anc, 0, plan).amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("recovery theorem with singleton tables") {
  std::mt19937_64 rng(2);
  const std::array<int, 2> anc{1, 2};
  for (int d : {2, 3, 5, 7}) {
    QuditDim dim(d);
    const CorrectionPlan plan = plan_correction(build_cosets(StabilizerSubgroup::trivial(dim)));
    double worst = 1.0;
    for (const auto& e : all_errors(dim)) {
      for (int i = 0; i < 50; ++i) {
        const VectorXc psi = oracle::random_vector(d, rng);
        const VectorXc errored = oracle::weyl(d, e.m(), e.n()) * psi;
        const StateVector out = apply_correction(with_syndrome(errored, d, e.m(), e.n()), anc, 0, plan);
        worst = std::min(worst, fidelity_with_pure(reduced_density_matrix(out, 0), psi));
      }
    }
    CHECK(worst > 1.0 - 1e-10);
  }
}

TEST_CASE("one-ancilla form decodes coset labels directly") {
  std::mt19937_64 rng(3);
  QuditDim d3(3);
  const CosetTable t = build_cosets(StabilizerSubgroup::cyclic(d3, 0, 1));
  const CorrectionPlan plan = plan_correction(t);
  const VectorXc psi = oracle::random_vector(3, rng);
  const VectorXc errored = oracle::weyl(3, 2, 0) * psi;
  const VectorXc fs[] = {errored, VectorXc::Unit(3, t.classify(WeylOp(d3, 2, 0)))};
  const std::array<int, 1> anc{1};
  const StateVector out = apply_correction(product_state(fs), anc, 0, plan);
  CHECK(fidelity_with_pure(reduced_density_matrix(out, 0), psi) > 1 - 1e-12);

  const VectorXc gs[] = {psi, VectorXc::Unit(4, 3)};
  CHECK_THROWS_AS(apply_correction(product_state(gs), anc, 0, plan), ConfigError);
}

TEST_CASE("each syndrome value fires exactly its own branch") {
  QuditDim d3(3);
  const CorrectionPlan plan = plan_correction(diagonal_table(d3));
  const std::array<int, 2> anc{1, 2};
  const Register reg({3, 3, 3});
  // Full controlled operator, column by column.
  oracle::M op(27, 27);
  for (int c = 0; c < 27; ++c) {
    VectorXc e = VectorXc::Zero(27);
    e(c) = 1.0;
    op.col(c) = apply_correction(StateVector(reg, e), anc, 0, plan).amplitudes();
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const MatrixXc& expected = *plan.branch(plan.label_of_syndrome[static_cast<std::size_t>(a * 3 + b)]);
      for (int a2 = 0; a2 < 3; ++a2) {
        for (int b2 = 0; b2 < 3; ++b2) {
          oracle::M block(3, 3);
          for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) block(j, k) = op(j * 9 + a2 * 3 + b2, k * 9 + a * 3 + b);
          }
          if (a2 == a && b2 == b) {
            CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-14);
          } else {
            CHECK(block.cwiseAbs().maxCoeff() == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("d=5 end-to-end correction of X^3 Z^2") {
  std::mt19937_64 rng(4);
  QuditDim d5(5);
  const CorrectionPlan plan = plan_correction(build_cosets(StabilizerSubgroup::trivial(d5)));
  const VectorXc psi = oracle::random_vector(5, rng);
  const StateVector out =
      apply_correction(with_syndrome(oracle::weyl(5, 3, 2) * psi, 5, 3, 2), std::array<int, 2>{1, 2}, 0, plan);
  CHECK(fidelity_with_pure(reduced_density_matrix(out, 0), psi) > 1 - 1e-10);
}
