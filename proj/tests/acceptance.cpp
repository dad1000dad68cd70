// Copyright 2026 The shadowfalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance harness. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails. Pass criterion numbers as
// arguments to run a subset, e.g. `acceptance 1 2 8`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dense_oracle.hpp"
#include "shadow_oracle.hpp"
#include "shadowfalqon/shadowfalqon.hpp"

using namespace shadowfalqon;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome commutator_identity() {
  double worst = 0.0;
  for (const Graph &g : {Graph(2, {{0, 1}}), cycle_graph(3), cycle_graph(4), complete_graph(4)}) {
    const std::size_t n = g.num_vertices();
    const Eigen::MatrixXcd hp = oracle::problem_hamiltonian(g);
    const Eigen::MatrixXcd hd = oracle::driver_hamiltonian(n);
    const Eigen::MatrixXcd comm = std::complex<double>(0.0, 1.0) * (hd * hp - hp * hd);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(comm.rows(), comm.cols());
    for (const PauliString &p : build_observables(g).control_terms) sum += dense_matrix(p);
    worst = std::max(worst, (comm - sum).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("max entry deviation %.3g (tolerance 1e-12)", worst)};
}

Outcome shadow_unbiasedness() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const ShadowEnsemble &ens : {ShadowEnsemble::uniform(), ShadowEnsemble::biased()}) {
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
      const Eigen::VectorXcd v = oracle::random_state(n, rng);
      const PauliString p = oracle::random_pauli(n, rng, ens.allows(Pauli::X));
      double mean = 0.0;
      for (const auto &shot : oracle::enumerate_shots(v, n, ens.allowed_bases(), p)) {
        mean += shot.weight * snapshot_value(ens, BasisAssignment(shot.bases), shot.outcome, p);
      }
      const StateVector psi(n, std::vector<Complex>(v.data(), v.data() + v.size()));
      worst = std::max(worst, std::abs(mean - exact_expectation(psi, p)));
      ++checked;
    }
  }
  return {worst <= 1e-12, fmt("%zu strings, max bias %.3g (tolerance 1e-12)", checked, worst)};
}

Outcome exact_convergence() {
  const Graph g = cycle_graph(4);
  FalqonConfig cfg;
  const auto trace = run_falqon(g, cfg);
  const auto dense = oracle::falqon(g, cfg.dt, cfg.layers);
  double drift = 0.0, rise = 0.0, prev = -2.0;
  for (std::size_t k = 0; k < trace.layers.size(); ++k) {
    drift = std::max(drift, std::abs(trace.layers[k].cost_exact - dense.cost[k]));
    rise = std::max(rise, trace.layers[k].cost_exact - prev);
    prev = trace.layers[k].cost_exact;
  }
  const double ratio = approximation_ratio(trace, g);
  const bool pass = ratio >= 0.99 && rise <= 1e-9 && drift <= 1e-8;
  return {pass, fmt("ratio %.4f after %zu layers (need 0.99), max rise %.2g, oracle drift %.2g",
                    ratio, trace.layers.size(), rise, drift)};
}

struct ModeBudgets {
  std::vector<std::uint64_t> budget;
  std::vector<bool> found;
};

ModeBudgets search(const Graph &g, EstimatorMode mode, std::uint64_t max_budget) {
  ModeBudgets out;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    BudgetSearchConfig cfg{g, {}};
    cfg.falqon.mode = mode;
    cfg.err = 0.01;
    cfg.start_budget = 1024;
    cfg.max_budget = max_budget;
    cfg.master_seed = seed;
    const auto r = budget_search(cfg);
    out.budget.push_back(r.budget);
    out.found.push_back(r.found);
  }
  return out;
}

std::string describe(const ModeBudgets &b) {
  std::string s;
  for (std::size_t i = 0; i < b.budget.size(); ++i) {
    s += (i ? "/" : "") + std::to_string(b.budget[i]) + (b.found[i] ? "" : "+");
  }
  return s;
}

Outcome table_row_four() {
  const Graph g = cycle_graph(4);
  const auto sh = search(g, EstimatorMode::Shadow, std::uint64_t{1} << 22);
  const auto di = search(g, EstimatorMode::Direct, std::uint64_t{1} << 22);
  auto hits = [](const ModeBudgets &b) {
    int h = 0;
    for (std::size_t i = 0; i < b.budget.size(); ++i) {
      h += b.found[i] && b.budget[i] >= 8192 && b.budget[i] <= 32768;
    }
    return h;
  };
  const bool pass = hits(sh) >= 2 && hits(di) >= 2;
  return {pass, "4-cycle budgets per seed: shadow " + describe(sh) + ", direct " + describe(di) +
                    " (need 8192..32768 in 2 of 3 for both)"};
}

Outcome complete_graph_advantage() {
  // '+' marks an exhausted search: the true budget exceeds the value shown,
  // which only strengthens a direct/shadow ratio when it is the direct side.
  bool pass = true;
  std::string detail;
  for (std::size_t n : {6u, 8u}) {
    const Graph g = complete_graph(n);
    const auto sh = search(g, EstimatorMode::Shadow, std::uint64_t{1} << 22);
    const auto di = search(g, EstimatorMode::Direct, std::uint64_t{1} << 22);
    int wins = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      wins += sh.found[i] && di.budget[i] >= 4 * sh.budget[i];
    }
    pass = pass && wins >= 2;
    detail += fmt("K%zu shadow %s direct %s (%d/3 with ratio >= 4); ", n, describe(sh).c_str(),
                  describe(di).c_str(), wins);
  }
  return {pass, detail};
}

Outcome scaling_law() {
  ScalingRunConfig cfg;
  cfg.master_seed = 7;
  const auto samples = scaling_run(cfg);
  const auto fits = fit_log(samples);
  bool pass = true;
  std::string detail;
  for (const auto &f : fits) {
    pass = pass && f.a >= 3.5 && f.a <= 5.0;
    detail += fmt("eps %.2f A %.3f B %.0f; ", f.epsilon, f.a, f.b);
  }
  const long c = ceil_bound(fits);
  pass = pass && (c == 4 || c == 5);
  return {pass, detail + fmt("ceil A = %ld (need A in [3.5, 5] and ceil 4 or 5)", c)};
}

Outcome statistical_sanity() {
  std::mt19937_64 rng(77);
  const Eigen::VectorXcd v = oracle::random_state(3, rng);
  const StateVector psi(3, std::vector<Complex>(v.data(), v.data() + v.size()));
  const std::vector<PauliString> obs{pauli_from_label("YZI")};
  const double o = exact_expectation(psi, obs[0]);
  bool pass = true;
  std::string detail = fmt("o = %.4f; ", o);
  for (std::uint64_t n : {1000ull, 10000ull}) {
    double s = 0.0, s2 = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      Rng eng(derive_seed(77, {n, static_cast<std::uint64_t>(r)}));
      const double e = direct_estimate(psi, obs, n, eng).estimates[0];
      s += e;
      s2 += e * e;
    }
    const double mean = s / reps;
    const double sd = std::sqrt((s2 - reps * mean * mean) / (reps - 1));
    const double expect = std::sqrt((1.0 - o * o) / static_cast<double>(n));
    const double q = sd / expect;
    pass = pass && q >= 1.0 / 1.5 && q <= 1.5;
    detail += fmt("N=%llu sd/theory %.3f; ", static_cast<unsigned long long>(n), q);
  }
  return {pass, detail};
}

Outcome fit_recovery() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> da(0.5, 10.0), db(-2000.0, 2000.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double a = da(rng), b = db(rng);
    std::vector<Sample> samples;
    for (double eps : {0.05, 0.1}) {
      for (std::size_t n = 4; n <= 8; ++n) {
        const std::size_t l = n * (n - 1);
        samples.push_back({"shadow", "complete:" + std::to_string(n), n, l, eps, 0,
                           a * log_scaling_regressor(static_cast<double>(l), eps) + b});
      }
    }
    for (const auto &f : fit_log(samples)) {
      worst = std::max({worst, std::abs(f.a - a), std::abs(f.b - b)});
    }
  }
  return {worst <= 1e-6, fmt("max coefficient error %.3g over 10 pairs", worst)};
}

} // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"commutator identity", commutator_identity},
      {"shadow unbiasedness", shadow_unbiasedness},
      {"exact-mode convergence on the 4-cycle", exact_convergence},
      {"4-cycle budgets near 16384 for both estimators", table_row_four},
      {"direct/shadow budget ratio >= 4 on K6 and K8", complete_graph_advantage},
      {"logarithmic scaling coefficient", scaling_law},
      {"direct-estimate standard error", statistical_sanity},
      {"fit recovery on synthetic data", fit_recovery},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r{false, ""};
    try {
      r = criteria[i].second();
    } catch (const std::exception &e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s: %s [%s] (%.1f s)\n", id, r.pass ? "PASS" : "FAIL", criteria[i].first,
                r.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !r.pass;
  }
  return failures == 0 ? 0 : 1;
}
