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
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "quditmem/algebra.hpp"
#include "quditmem/statevec.hpp"

using namespace quditmem;

namespace {

StateVector random_state(const Register& reg, std::mt19937_64& rng) {
  return StateVector(reg, oracle::random_vector(static_cast<int>(reg.size()), rng));
}

double max_abs(const VectorXc& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("register construction") {
  CHECK_THROWS_AS(Register({}), ConfigError);
  CHECK_THROWS_AS(Register({3, 1}), ConfigError);
  CHECK_THROWS_AS(Register({1024, 1024, 2}), ConfigError);
  CHECK_NOTHROW(Register({1024, 1024}));
  CHECK_THROWS_AS(Register({4, 4}, 15), ConfigError);
  const Register r({5, 3});
  CHECK(r.size() == 15);
  CHECK(r.stride(0) == 3);
  CHECK(r.stride(1) == 1);
}

TEST_CASE("basis_state flattening") {
  const std::array<int, 1> l0{0};
  const StateVector s0 = basis_state(Register({3}), l0);
  CHECK(max_abs(s0.amplitudes() - VectorXc::Unit(3, 0)) == 0.0);

  const std::array<int, 2> l10{1, 0};
  CHECK(std::abs(basis_state(Register({2, 2}), l10).amplitude(2) - 1.0) == 0.0);

  const std::array<int, 2> l42{4, 2};
  const StateVector s = basis_state(Register({5, 3}), l42);
  CHECK(std::abs(s.amplitude(14) - 1.0) == 0.0);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0));

  const std::array<int, 2> bad{5, 0};
  CHECK_THROWS(basis_state(Register({5, 3}), bad));
  const std::array<int, 1> short_labels{0};
  CHECK_THROWS(basis_state(Register({5, 3}), short_labels));
}

TEST_CASE("state vectors must be normalized") {
  CHECK_THROWS_AS(StateVector(Register({2}), VectorXc::Ones(2)), InvariantViolation);
  CHECK_THROWS(StateVector(Register({2}), VectorXc::Ones(3) / std::sqrt(3.0)));
  const StateVector s = StateVector::normalized(Register({2}), VectorXc::Ones(2));
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(StateVector::normalized(Register({2}), VectorXc::Zero(2)));
}

TEST_CASE("product_state matches the Kronecker product") {
  std::mt19937_64 rng(1);
  const VectorXc a = oracle::random_vector(3, rng), b = oracle::random_vector(4, rng);
  const VectorXc c = oracle::random_vector(2, rng);
  const VectorXc fs[] = {a, b, c};
  const StateVector s = product_state(fs);
  CHECK(s.reg().dims() == std::vector<int>{3, 4, 2});
  CHECK(max_abs(s.amplitudes() - oracle::kron(oracle::kron(a, b), c)) < 1e-15);
}

TEST_CASE("apply_site_unitary basics") {
  const Register r({3});
  const std::array<int, 1> l0{0};
  const StateVector s = basis_state(r, l0);
  const StateVector same = apply_site_unitary(s, 0, MatrixXc::Identity(3, 3));
  CHECK(max_abs(same.amplitudes() - s.amplitudes()) == 0.0);
  const StateVector one = apply_site_unitary(s, 0, oracle::shift(3, 1));
  CHECK(std::abs(one.amplitude(1) - 1.0) < 1e-15);

  MatrixXc not_unitary = MatrixXc::Identity(3, 3);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(apply_site_unitary(s, 0, not_unitary), ConfigError);
  CHECK_THROWS_AS(apply_site_unitary(s, 0, MatrixXc::Identity(2, 2)), ConfigError);
  CHECK_THROWS(apply_site_unitary(s, 1, MatrixXc::Identity(3, 3)));
}

TEST_CASE("site unitary against the Kronecker oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Register r({3, 4, 2});
    const StateVector s = random_state(r, rng);
    for (int site = 0; site < 3; ++site) {
      const int d = r.dim(site);
      const oracle::M u = oracle::random_unitary(d, rng);
      std::vector<oracle::M> factors;
      for (int k = 0; k < 3; ++k) factors.push_back(k == site ? u : oracle::M::Identity(r.dim(k), r.dim(k)));
      const VectorXc ref = oracle::kron_all(factors) * s.amplitudes();
      const StateVector out = apply_site_unitary(s, site, u);
      CHECK(max_abs(out.amplitudes() - ref) < 1e-12);
      CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("composition and locality") {
  std::mt19937_64 rng(5);
  const Register r({4, 3});
  const StateVector s = random_state(r, rng);
  const oracle::M u = oracle::random_unitary(4, rng), v = oracle::random_unitary(4, rng);
  const oracle::M w = oracle::random_unitary(3, rng);
  const StateVector uv = apply_site_unitary(apply_site_unitary(s, 0, u), 0, v);
  CHECK(max_abs(uv.amplitudes() - apply_site_unitary(s, 0, v * u).amplitudes()) < 1e-12);
  const StateVector a = apply_site_unitary(apply_site_unitary(s, 0, u), 1, w);
  const StateVector b = apply_site_unitary(apply_site_unitary(s, 1, w), 0, u);
  CHECK(max_abs(a.amplitudes() - b.amplitudes()) < 1e-12);
}

TEST_CASE("CNOT truth table") {
  const Register r({2, 2});
  const std::map<int, MatrixXc> branches{{1, oracle::shift(2, 1)}};
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const std::array<int, 2> in{c, t};
      const std::array<int, 2> expected{c, c ^ t};
      const StateVector out = apply_controlled(basis_state(r, in), 0, 1, branches);
      CHECK(fidelity(out, basis_state(r, expected)) == doctest::Approx(1.0));
    }
  }
  const std::array<int, 2> in{1, 0};
  CHECK_THROWS_AS(apply_controlled(basis_state(r, in), 0, 0, branches), ConfigError);
}

TEST_CASE("identity branches leave the state unchanged") {
  std::mt19937_64 rng(8);
  const Register r({3, 3});
  const StateVector s = random_state(r, rng);
  const std::map<int, MatrixXc> none;
  CHECK(max_abs(apply_controlled(s, 0, 1, none).amplitudes() - s.amplitudes()) == 0.0);
  const std::map<int, MatrixXc> ids{{0, MatrixXc::Identity(3, 3)}, {2, MatrixXc::Identity(3, 3)}};
  CHECK(max_abs(apply_controlled(s, 1, 0, ids).amplitudes() - s.amplitudes()) < 1e-15);
}

TEST_CASE("d=3 controlled shifts against a 9x9 block matrix") {
  const Register r({3, 3});
  const VectorXc uniform = VectorXc::Ones(3) / std::sqrt(3.0);
  const VectorXc fs[] = {uniform, VectorXc::Unit(3, 0)};
  const StateVector s = product_state(fs);
  const std::map<int, MatrixXc> branches{
      {0, MatrixXc::Identity(3, 3)}, {1, oracle::shift(3, 1)}, {2, oracle::shift(3, 2)}};
  oracle::M block = oracle::M::Zero(9, 9);
  for (int c = 0; c < 3; ++c) block.block(3 * c, 3 * c, 3, 3) = oracle::shift(3, c);
  const StateVector out = apply_controlled(s, 0, 1, branches);
  CHECK(max_abs(out.amplitudes() - block * s.amplitudes()) < 1e-13);

  // Control after target in site order.
  oracle::M perm_block = oracle::M::Zero(9, 9);
  for (int t = 0; t < 3; ++t) {
    for (int c = 0; c < 3; ++c) {
      const oracle::M u = oracle::shift(3, c);
      for (int t2 = 0; t2 < 3; ++t2) perm_block(3 * t2 + c, 3 * t + c) = u(t2, t);
    }
  }
  const VectorXc gs[] = {VectorXc::Unit(3, 0), uniform};
  const StateVector s2 = product_state(gs);
  CHECK(max_abs(apply_controlled(s2, 1, 0, branches).amplitudes() - perm_block * s2.amplitudes()) < 1e-13);
}

TEST_CASE("multi-control selector sees labels in control order") {
  const Register r({2, 3, 2});
  std::mt19937_64 rng(9);
  const StateVector s = random_state(r, rng);
  // Shift the target only for control labels (site2 = 1, site0 = 0).
  const std::array<int, 2> controls{2, 0};
  const MatrixXc x3 = oracle::shift(3, 1);
  const StateVector out2 = apply_controlled(s, controls, 1, [&](std::span<const int> labels) {
    return labels[0] == 1 && labels[1] == 0 ? &x3 : nullptr;
  });
  const oracle::M p1 = oracle::V::Unit(2, 0) * oracle::V::Unit(2, 0).transpose();  // |0><0|
  const oracle::M p2 = oracle::V::Unit(2, 1) * oracle::V::Unit(2, 1).transpose();  // |1><1|
  const oracle::M i2 = oracle::M::Identity(2, 2), i3 = oracle::M::Identity(3, 3);
  const oracle::M op = oracle::kron_all({i2, i3, i2}) + oracle::kron_all({p1, x3 - i3, p2});
  CHECK(max_abs(out2.amplitudes() - op * s.amplitudes()) < 1e-13);
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(12);
  const Register r({4});
  const StateVector s = random_state(r, rng);
  CHECK(fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-15));
  const std::array<int, 1> l0{0}, l1{1};
  CHECK(fidelity(basis_state(r, l0), basis_state(r, l1)) == 0.0);
  const StateVector rotated(r, std::polar(1.0, 0.7) * s.amplitudes());
  CHECK(fidelity(s, rotated) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(fidelity(s, random_state(Register({2, 2}), rng)), ConfigError);
}

TEST_CASE("measurement of a basis state is certain") {
  const std::array<int, 1> l2{2};
  const StateVector s = basis_state(Register({4}), l2);
  Rng rng = trial_rng(1, 0);
  for (int i = 0; i < 20; ++i) {
    const Measurement m = measure_site(s, 0, rng);
    CHECK(m.outcome == 2);
  }
  CHECK_THROWS_AS(project_site(s, 0, 1), InvariantViolation);
}

TEST_CASE("Born-rule statistics for a uniform d=5 state") {
  const StateVector s(Register({5}), VectorXc::Ones(5) / std::sqrt(5.0));
  Rng rng = trial_rng(99, 0);
  std::array<int, 5> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(measure_site(s, 0, rng).outcome)];
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  for (int c : counts) CHECK(std::abs(c - n * 0.2) < 3 * sigma);
}

TEST_CASE("Bell correlation") {
  VectorXc amps = VectorXc::Zero(4);
  amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
  const StateVector bell(Register({2, 2}), amps);
  const StateVector collapsed = project_site(bell, 0, 1);
  CHECK(marginal_probabilities(collapsed, 1)[1] == doctest::Approx(1.0));
  Rng rng = trial_rng(5, 5);
  for (int i = 0; i < 20; ++i) {
    const Measurement m = measure_site(bell, 0, rng);
    CHECK(marginal_probabilities(m.state, 1)[static_cast<std::size_t>(m.outcome)] ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("measurement transcripts are reproducible") {
  std::mt19937_64 g(4);
  const StateVector s = random_state(Register({3, 3}), g);
  auto transcript = [&](std::uint64_t seed) {
    Rng rng = trial_rng(seed, 3);
    std::vector<int> out;
    for (int i = 0; i < 50; ++i) out.push_back(measure_site(s, i % 2, rng).outcome);
    return out;
  };
  CHECK(transcript(17) == transcript(17));
}

TEST_CASE("expectation values") {
  const std::array<int, 1> l0{0};
  MatrixXc z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(expectation(basis_state(Register({2}), l0), 0, z) == doctest::Approx(1.0));

  const StateVector u(Register({3}), VectorXc::Ones(3) / std::sqrt(3.0));
  MatrixXc diag = MatrixXc::Zero(3, 3);
  diag(1, 1) = 1.0;
  diag(2, 2) = 2.0;
  CHECK(expectation(u, 0, diag) == doctest::Approx(1.0));

  std::mt19937_64 rng(21);
  const Register r({3, 4});
  for (int i = 0; i < 5; ++i) {
    const StateVector s = random_state(r, rng);
    const oracle::M h = oracle::random_hermitian(4, rng);
    const oracle::M full = oracle::kron(oracle::M::Identity(3, 3), h);
    const double ref = (s.amplitudes().adjoint() * full * s.amplitudes())(0).real();
    CHECK(expectation(s, 1, h) == doctest::Approx(ref).epsilon(1e-12));
  }
  MatrixXc bad = MatrixXc::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(expectation(basis_state(Register({2}), l0), 0, bad), ConfigError);
}

TEST_CASE("reduced density matrix of a product state") {
  std::mt19937_64 rng(22);
  const VectorXc a = oracle::random_vector(3, rng), b = oracle::random_vector(2, rng);
  const VectorXc fs[] = {a, b};
  const StateVector s = product_state(fs);
  CHECK((reduced_density_matrix(s, 0) - a * a.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((reduced_density_matrix(s, 1) - b * b.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(fidelity_with_pure(reduced_density_matrix(s, 0), a) == doctest::Approx(1.0));
}

TEST_CASE("state dump round trip") {
  std::mt19937_64 rng(23);
  const Register r({3, 2});
  const StateVector s = random_state(r, rng);
  std::stringstream ss;
  write_state_dump(ss, s);
  const StateVector back = read_state_dump(ss, r);
  CHECK((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  const std::array<int, 2> l{2, 1};
  std::ostringstream basis;
  write_state_dump(basis, basis_state(r, l));
  CHECK(basis.str() == "5\t1\t0\n");
}
