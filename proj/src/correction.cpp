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

#include "quditmem/correction.hpp"

#include <algorithm>
#include <deque>

namespace quditmem {

namespace {

std::size_t slot(const WeylOp& op) {
  return static_cast<std::size_t>(op.m()) * op.d() + op.n();
}

WeylOp drop_phase(const WeylOp& op) { return {op.dim(), op.m(), op.n(), 0}; }

}  // namespace

StabilizerSubgroup::StabilizerSubgroup(QuditDim dim, std::vector<WeylOp> generators,
                                       std::vector<bool> member)
    : dim_(dim), generators_(std::move(generators)), member_(std::move(member)) {
  const int d = dim.value();
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (member_[static_cast<std::size_t>(m) * d + n]) elements_.emplace_back(dim, m, n);
    }
  }
}

StabilizerSubgroup StabilizerSubgroup::generated_by(QuditDim dim,
                                                    const std::vector<WeylOp>& generators) {
  const int d = dim.value();
  std::vector<WeylOp> gens;
  for (const auto& g : generators) {
    if (g.dim() != dim) throw ConfigError("subgroup generator has the wrong dimension");
    gens.push_back(drop_phase(g));
  }
  std::vector<bool> member(static_cast<std::size_t>(d) * d, false);
  std::deque<WeylOp> frontier{WeylOp::identity(dim)};
  member[0] = true;
  while (!frontier.empty()) {
    const WeylOp e = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      const WeylOp next = drop_phase(compose(e, g));
      if (!member[slot(next)]) {
        member[slot(next)] = true;
        frontier.push_back(next);
      }
    }
  }
  return {dim, std::move(gens), std::move(member)};
}

StabilizerSubgroup StabilizerSubgroup::from_elements(QuditDim dim,
                                                     const std::vector<WeylOp>& elements) {
  const int d = dim.value();
  std::vector<bool> member(static_cast<std::size_t>(d) * d, false);
  for (const auto& e : elements) {
    if (e.dim() != dim) throw ConfigError("subgroup element has the wrong dimension");
    member[slot(e)] = true;
  }
  if (!member[0]) throw ConfigError("subgroup element list does not contain the identity");
  for (const auto& a : elements) {
    for (const auto& b : elements) {
      if (!member[slot(compose(a, b))]) {
        throw ConfigError("subgroup element list is not closed: " + a.to_string() + " * " +
                          b.to_string());
      }
    }
  }
  std::vector<WeylOp> gens;
  for (const auto& e : elements) gens.push_back(drop_phase(e));
  return {dim, std::move(gens), std::move(member)};
}

bool StabilizerSubgroup::contains(const WeylOp& op) const {
  if (op.dim() != dim_) throw ConfigError("subgroup membership: dimension mismatch");
  return member_[slot(op)];
}

CosetTable::CosetTable(StabilizerSubgroup subgroup, std::vector<CosetRow> rows, TransversalKind kind)
    : subgroup_(std::move(subgroup)), rows_(std::move(rows)), kind_(kind) {
  const int d = dim().value();
  const std::size_t group_order = static_cast<std::size_t>(d) * d;
  if (group_order % subgroup_.size() != 0) {
    throw ConfigError("subgroup order does not divide d^2");
  }
  if (rows_.size() * subgroup_.size() != group_order) {
    throw ConfigError("coset table needs " + std::to_string(group_order / subgroup_.size()) +
                      " rows, got " + std::to_string(rows_.size()));
  }
  label_of_.assign(group_order, -1);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const CosetRow& row = rows_[i];
    if (row.label != static_cast<int>(i)) {
      throw ConfigError("coset labels must be 0..n-1 in order (duplicate or gap at " +
                        std::to_string(row.label) + ")");
    }
    if (row.representative.dim() != dim() || row.correction.dim() != dim()) {
      throw ConfigError("coset row dimension mismatch");
    }
    if (!compose(row.correction, row.representative).is_projective_identity()) {
      throw ConfigError("coset row " + std::to_string(i) + ": correction is not the inverse");
    }
    for (const auto& h : subgroup_.elements()) {
      const std::size_t s = slot(compose(h, row.representative));
      if (label_of_[s] != -1) {
        throw ConfigError("representatives " + std::to_string(label_of_[s]) + " and " +
                          std::to_string(i) + " lie in the same coset");
      }
      label_of_[s] = static_cast<int>(i);
    }
  }
}

int CosetTable::classify(const WeylOp& error) const {
  if (error.dim() != dim()) throw ConfigError("classify: dimension mismatch");
  return label_of_[slot(error)];
}

CosetTable build_cosets(const StabilizerSubgroup& subgroup) {
  const QuditDim dim = subgroup.dim();
  const int d = dim.value();
  for (const auto& a : subgroup.elements()) {
    for (const auto& b : subgroup.elements()) {
      if (!subgroup.contains(compose(a, b))) throw ConfigError("subgroup is not closed");
    }
  }
  std::vector<bool> covered(static_cast<std::size_t>(d) * d, false);
  std::vector<CosetRow> rows;
  // Row-major scan visits (m, n) lexicographically, so the first uncovered
  // element of each coset is its least member.
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const WeylOp e(dim, m, n);
      if (covered[slot(e)]) continue;
      for (const auto& h : subgroup.elements()) covered[slot(compose(h, e))] = true;
      const int label = static_cast<int>(rows.size());
      rows.push_back({label, e, inverse(e)});
    }
  }
  return {subgroup, std::move(rows), TransversalKind::canonical};
}

CosetTable diagonal_table(QuditDim dim) {
  const int d = dim.value();
  std::vector<CosetRow> rows;
  for (int label = 0; label < d; ++label) {
    int i = label;
    if (d >= 4 && label == d - 2) i = d - 1;
    if (d >= 4 && label == d - 1) i = d - 2;
    const WeylOp rep(dim, i + 1, i);
    rows.push_back({label, rep, inverse(rep)});
  }
  return {StabilizerSubgroup::cyclic(dim, 0, 1), std::move(rows), TransversalKind::diagonal_table};
}

CsvTable coset_table_csv(const CosetTable& table) {
  CsvTable csv({"syndrome", "rep_m", "rep_n", "corr_m", "corr_n"});
  for (const auto& row : table.rows()) {
    csv.add_row({std::to_string(row.label), std::to_string(row.representative.m()),
                 std::to_string(row.representative.n()), std::to_string(row.correction.m()),
                 std::to_string(row.correction.n())});
  }
  return csv;
}

const MatrixXc* CorrectionPlan::branch(int label) const {
  for (const auto& b : branches) {
    if (b.syndrome == label) return &b.unitary;
  }
  return nullptr;
}

CorrectionPlan plan_correction(const CosetTable& table) {
  const QuditDim dim = table.dim();
  const int d = dim.value();
  CorrectionPlan plan;
  plan.d = d;
  std::vector<bool> seen(table.size(), false);
  for (const auto& row : table.rows()) {
    if (row.label < 0 || row.label >= static_cast<int>(seen.size()) || seen[row.label]) {
      throw ConfigError("plan_correction: duplicate or invalid syndrome label " +
                        std::to_string(row.label));
    }
    seen[row.label] = true;
    MatrixXc u = table.subgroup().contains(row.representative) ? MatrixXc::Identity(d, d)
                                                               : matrix(row.correction);
    plan.branches.push_back({row.label, std::move(u)});
  }
  plan.label_of_syndrome.resize(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      plan.label_of_syndrome[static_cast<std::size_t>(a) * d + b] = table.classify(WeylOp(dim, a, b));
    }
  }
  return plan;
}

StateVector apply_correction(const StateVector& state, std::span<const int> syndrome_anc_sites,
                             int data_site, const CorrectionPlan& plan) {
  const Register& reg = state.reg();
  if (reg.dim(data_site) != plan.d) throw ConfigError("apply_correction: data dimension mismatch");
  if (syndrome_anc_sites.empty() || syndrome_anc_sites.size() > 2) {
    throw ConfigError("apply_correction: expected one or two syndrome ancilla sites");
  }
  if (syndrome_anc_sites.size() == 2) {
    for (int s : syndrome_anc_sites) {
      if (reg.dim(s) != plan.d) throw ConfigError("apply_correction: ancilla dimension mismatch");
    }
  }

  int max_label = -1;
  for (const auto& b : plan.branches) max_label = std::max(max_label, b.syndrome);
  std::vector<const MatrixXc*> by_label(static_cast<std::size_t>(max_label + 1), nullptr);
  for (const auto& b : plan.branches) by_label[b.syndrome] = &b.unitary;

  auto label_of = [&](std::span<const int> values) {
    if (values.size() == 1) return values[0];
    return plan.label_of_syndrome[static_cast<std::size_t>(values[0]) * plan.d + values[1]];
  };
  auto lookup = [&](int label) -> const MatrixXc* {
    return label >= 0 && label < static_cast<int>(by_label.size()) ? by_label[label] : nullptr;
  };

  // Every populated ancilla value must map to a branch.
  std::vector<int> values(syndrome_anc_sites.size());
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (std::norm(amps(static_cast<Eigen::Index>(i))) < 1e-24) continue;
    for (std::size_t c = 0; c < values.size(); ++c) values[c] = reg.label(i, syndrome_anc_sites[c]);
    const int label = label_of(values);
    if (lookup(label) == nullptr) {
      throw ConfigError("apply_correction: syndrome label " + std::to_string(label) +
                        " has no branch");
    }
  }
  return apply_controlled(state, syndrome_anc_sites, data_site,
                          [&](std::span<const int> labels) { return lookup(label_of(labels)); });
}

}  // namespace quditmem
