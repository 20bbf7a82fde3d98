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

// qmem: experiment runner for the qudit memory model.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "quditmem/correction.hpp"
#include "quditmem/harness.hpp"

namespace {

using quditmem::ExperimentConfig;
using nlohmann::json;

enum class Format { csv, json };

struct Options {
  ExperimentConfig config;
  int k = 0;
  std::string subgroup;
  std::string sequence = "twirl";
  Format format = Format::csv;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void emit(const Options& opt, const std::string& body) {
  if (opt.config.output_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(opt.config.output_path, std::ios::binary);
  if (!out) throw quditmem::ConfigError("cannot open output file " + opt.config.output_path);
  out << body;
}

void add_common(CLI::App* app, Options& opt) {
  auto& c = opt.config;
  app->add_option("--d", c.d, "qudit dimension")->capture_default_str();
  app->add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--sigma-shift", c.sigma_shift, "wrapped-Gaussian width of X exponents")
      ->capture_default_str();
  app->add_option("--sigma-phase", c.sigma_phase, "wrapped-Gaussian width of Z exponents")
      ->capture_default_str();
  app->add_option("--k", opt.k, "coarse QFT bins (default ceil(log2 d))");
  app->add_option("--epsilon", c.epsilon, "escalation tolerance")->capture_default_str();
  app->add_option("--subgroup", opt.subgroup, "stabilizer subgroup: singleton, z, diagonal or m,n");
  app->add_option("--out", c.output_path, "output file (default stdout)");
  app->add_option("--format", opt.format, "csv or json")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}));
  app->add_option("--threads", c.threads, "worker threads")->capture_default_str();
}

void finish_config(CLI::App* app, Options& opt, const char* default_subgroup) {
  if (app->count("--k") > 0) opt.config.k = opt.k;
  opt.config.subgroup =
      quditmem::SubgroupSpec::parse(opt.subgroup.empty() ? default_subgroup : opt.subgroup);
  if (opt.sequence == "cyclic") {
    opt.config.echo_sequence = quditmem::EchoSequenceKind::cyclic;
  } else if (opt.sequence == "twirl") {
    opt.config.echo_sequence = quditmem::EchoSequenceKind::twirl;
  } else {
    throw quditmem::ConfigError("--sequence must be cyclic or twirl");
  }
  opt.config.validate();
}

int run_cycle(const Options& opt) {
  const auto records = quditmem::run_cycle(opt.config);
  if (opt.format == Format::csv) {
    emit(opt, quditmem::cycle_csv(records).str());
    return 0;
  }
  const auto s = quditmem::summarize(records);
  json j = {{"command", "cycle"},
            {"d", opt.config.d},
            {"trials", opt.config.trials},
            {"seed", opt.config.seed},
            {"subgroup", opt.config.subgroup.to_string()},
            {"mean_fidelity", s.mean_fidelity},
            {"min_fidelity", s.min_fidelity},
            {"corrected_rate", s.corrected_rate},
            {"escalation_rate", s.escalation_rate},
            {"mean_gate_cost", s.mean_gate_cost}};
  emit(opt, j.dump(2) + "\n");
  return 0;
}

int run_qft_bench(const Options& opt) {
  const auto rows = quditmem::run_qft_bench(opt.config);
  if (opt.format == Format::csv) {
    emit(opt, quditmem::qft_bench_csv(rows).str());
    return 0;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d", r.d},
                   {"k", r.k},
                   {"epsilon", r.epsilon},
                   {"mean_cost", r.mean_cost},
                   {"full_cost", r.full_cost},
                   {"escalation_rate", r.escalation_rate},
                   {"analytic_escalation", r.analytic_escalation}});
  }
  emit(opt, json{{"command", "qft-bench"}, {"rows", arr}}.dump(2) + "\n");
  return 0;
}

int run_echo(const Options& opt) {
  const auto report = quditmem::run_echo_verify(opt.config);
  if (opt.format == Format::csv) {
    emit(opt, quditmem::echo_csv(report).str());
  } else {
    json j = {{"command", "echo-verify"},
              {"d", opt.config.d},
              {"slope_free", number(report.slope_free)},
              {"slope_echo", number(report.slope_echo)},
              {"separation", number(report.slope_echo - report.slope_free)},
              {"status", quditmem::to_string(report.status)}};
    emit(opt, j.dump(2) + "\n");
  }
  if (report.status == quditmem::EchoStatus::insufficient_separation) {
    std::cerr << "echo-verify: slope separation below "
              << quditmem::kRequiredSlopeSeparation << "\n";
    return 3;
  }
  return 0;
}

int run_fisher(const Options& opt) {
  const auto report = quditmem::run_fisher_trend(opt.config);
  if (opt.format == Format::csv) {
    emit(opt, quditmem::fisher_csv(report).str());
    return 0;
  }
  json trend = json::array();
  for (const auto& r : report.trend) {
    trend.push_back({{"t", r.t}, {"projective", r.fisher_projective}, {"nd", r.fisher_nd}});
  }
  json gaps = json::array();
  for (const auto& g : report.gaps) {
    gaps.push_back({{"k", g.k},
                    {"epsilon", g.epsilon},
                    {"full", g.fisher_full},
                    {"adaptive", g.fisher_adaptive},
                    {"gap", g.gap}});
  }
  json j = {{"command", "fisher"},
            {"d", opt.config.d},
            {"knee_t", report.knee_t},
            {"monotone_within_t2", report.monotone_within_t2},
            {"trend", trend},
            {"gaps", gaps}};
  emit(opt, j.dump(2) + "\n");
  return 0;
}

int run_coset_table(const Options& opt) {
  const auto table = quditmem::make_table(opt.config.subgroup, quditmem::QuditDim(opt.config.d));
  const auto csv = quditmem::coset_table_csv(table);
  if (opt.format == Format::csv) {
    emit(opt, csv.str());
    return 0;
  }
  json rows = json::array();
  for (const auto& r : csv.rows()) {
    json row;
    for (std::size_t i = 0; i < r.size(); ++i) row[csv.header()[i]] = std::stoi(r[i]);
    rows.push_back(row);
  }
  emit(opt, json{{"command", "coset-table"},
                 {"d", opt.config.d},
                 {"subgroup", opt.config.subgroup.to_string()},
                 {"rows", rows}}
                .dump(2) +
                "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qudit quantum memory simulator"};
  app.require_subcommand(1);

  Options opt;
  auto& c = opt.config;

  auto* cycle = app.add_subcommand("cycle", "memory cycles: extraction, adaptive QFT, correction");
  add_common(cycle, opt);

  auto* bench = app.add_subcommand("qft-bench", "adaptive QFT cost against the full transform");
  add_common(bench, opt);
  bench->add_option("--sweep", c.sweep, "dimensions to benchmark (default: --d)")->delimiter(',');

  auto* echo = app.add_subcommand("echo-verify", "infidelity scaling with and without refocusing");
  add_common(echo, opt);
  echo->add_option("--omega", c.echo_omega, "phase noise strength")->capture_default_str();
  echo->add_option("--transverse", c.echo_transverse, "shift noise strength relative to omega")
      ->capture_default_str();
  echo->add_option("--sequence", opt.sequence, "cyclic or twirl")->capture_default_str();
  echo->add_option("--times", c.echo_times, "total evolution times")->delimiter(',');
  echo->add_option("--trotter", c.trotter_steps, "sequence repetitions")->capture_default_str();

  auto* fisher = app.add_subcommand("fisher", "Fisher information trends");
  add_common(fisher, opt);
  fisher->add_option("--theta", c.fisher_theta, "phase parameter")->capture_default_str();
  fisher->add_option("--t2", c.fisher_t2, "coherence time")->capture_default_str();
  fisher->add_option("--step", c.fisher_step, "finite-difference step")->capture_default_str();
  fisher->add_option("--times", c.fisher_times, "accumulation times")->delimiter(',');
  fisher->add_option("--epsilons", c.fisher_epsilons, "epsilon values for the gap table")
      ->delimiter(',');

  auto* cosets = app.add_subcommand("coset-table", "syndrome to correction table");
  add_common(cosets, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cycle) {
      finish_config(cycle, opt, "z");
      return run_cycle(opt);
    }
    if (*bench) {
      finish_config(bench, opt, "z");
      return run_qft_bench(opt);
    }
    if (*echo) {
      finish_config(echo, opt, "z");
      return run_echo(opt);
    }
    if (*fisher) {
      finish_config(fisher, opt, "z");
      return run_fisher(opt);
    }
    finish_config(cosets, opt, "diagonal");
    return run_coset_table(opt);
  } catch (const quditmem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const quditmem::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
