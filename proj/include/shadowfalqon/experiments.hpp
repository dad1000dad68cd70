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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/estimators.hpp"
#include "shadowfalqon/falqon.hpp"
#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/hamiltonian.hpp"
#include "shadowfalqon/seeding.hpp"
#include "shadowfalqon/statevector.hpp"

namespace shadowfalqon {

// ---------------------------------------------------------------------------
// Geometric budget schedule

/// start * growth^step, rounded to the nearest integer.
inline std::uint64_t schedule_budget(std::uint64_t start, double growth, std::size_t step) {
  return static_cast<std::uint64_t>(
      std::llround(static_cast<double>(start) * std::pow(growth, static_cast<double>(step))));
}

/** Mean over layers of |C_est,i - C_exact,i|, over the common prefix of two traces. */
inline double mean_cost_error(const FalqonTrace &estimated, const FalqonTrace &exact) {
  const std::size_t len = std::min(estimated.layers.size(), exact.layers.size());
  if (len == 0) throw DomainError("cannot compare empty traces");
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    s += std::abs(estimated.layers[i].cost_estimate - exact.layers[i].cost_exact);
  }
  return s / static_cast<double>(len);
}

// ---------------------------------------------------------------------------
// Budget-doubling search under the mean cost-error criterion

struct BudgetSearchConfig {
  Graph graph;
  /// Template for the estimated runs; mode must be Direct or Shadow.
  FalqonConfig falqon;
  double err = 0.01;
  /// Measurements per layer of the first probe. In shadow mode it must be a
  /// multiple of falqon.shadow_shots (K); M = budget / K.
  std::uint64_t start_budget = 1024;
  double growth = 2.0;
  std::uint64_t max_budget = std::uint64_t{1} << 22;
  std::size_t repetitions = 3;
  std::uint64_t master_seed = 0;

  void validate() const {
    falqon.validate();
    if (falqon.mode == EstimatorMode::Exact) {
      throw DomainError("budget search needs direct or shadow mode");
    }
    if (!(err > 0.0)) throw DomainError("err must be positive");
    if (!(growth > 1.0)) throw DomainError("growth factor must exceed 1");
    if (start_budget < 1 || start_budget > max_budget) {
      throw DomainError("start budget must lie in [1, max budget]");
    }
    if (repetitions < 1) throw DomainError("repetitions must be at least 1");
  }
};

struct BudgetProbe {
  std::uint64_t budget;
  /// Mean cost error of each repetition.
  std::vector<double> errors;
  double mean_error;
};

struct BudgetSearchResult {
  bool found = false;
  /// Smallest passing budget, or the last budget probed when exhausted.
  std::uint64_t budget = 0;
  std::vector<BudgetProbe> probes;
  FalqonTrace estimated;
  FalqonTrace exact;
};

namespace detail {

inline FalqonConfig with_budget(FalqonConfig cfg, std::uint64_t budget) {
  if (cfg.mode == EstimatorMode::Shadow) {
    if (budget % cfg.shadow_shots != 0) {
      throw DomainError("shadow budget " + std::to_string(budget) +
                        " is not a multiple of K = " + std::to_string(cfg.shadow_shots));
    }
    cfg.shadow_rounds = static_cast<std::size_t>(budget / cfg.shadow_shots);
  } else {
    cfg.direct_budget = budget;
  }
  return cfg;
}

inline FalqonConfig exact_reference_config(const FalqonConfig &cfg) {
  FalqonConfig ref = cfg;
  ref.mode = EstimatorMode::Exact;
  ref.halt_tolerance.reset();
  return ref;
}

} // namespace detail

/**
 * Walks the schedule start * growth^m and returns the first budget whose
 * mean cost error, averaged over the repetitions, is at most err. The
 * reference is an independent exact-feedback run. Repetition r always uses
 * the seed derived from (master_seed, r), whatever the budget.
 */
inline BudgetSearchResult budget_search(const BudgetSearchConfig &cfg) {
  cfg.validate();
  const FalqonProblem problem(cfg.graph);
  BudgetSearchResult result;
  {
    Rng unused(0);
    result.exact = run_falqon(problem, detail::exact_reference_config(cfg.falqon), unused);
  }
  FalqonConfig noisy = cfg.falqon;
  noisy.halt_tolerance.reset();

  for (std::size_t m = 0;; ++m) {
    const std::uint64_t budget = schedule_budget(cfg.start_budget, cfg.growth, m);
    if (budget > cfg.max_budget) break;
    const FalqonConfig run_cfg = detail::with_budget(noisy, budget);
    BudgetProbe probe{budget, {}, 0.0};
    FalqonTrace last{{}, init_plus_state(1), 0.0};
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
      Rng rng(derive_seed(cfg.master_seed, {r}));
      FalqonTrace t = run_falqon(problem, run_cfg, rng);
      probe.errors.push_back(mean_cost_error(t, result.exact));
      last = std::move(t);
    }
    double s = 0.0;
    for (double e : probe.errors) s += e;
    probe.mean_error = s / static_cast<double>(probe.errors.size());
    result.probes.push_back(probe);
    result.budget = budget;
    result.estimated = std::move(last);
    if (probe.mean_error <= cfg.err) {
      result.found = true;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Complete-graph scaling experiment

struct ScalingRunConfig {
  std::vector<std::size_t> sizes{4, 5, 6, 7, 8};
  std::vector<double> epsilons{0.05, 0.1};
  std::size_t runs = 10;
  std::uint64_t shots_per_round = kDefaultShotsPerRound;
  /// First probe uses this many rounds; rounds grow geometrically.
  std::size_t start_rounds = 1;
  double growth = 2.0;
  std::uint64_t max_budget = std::uint64_t{1} << 24;
  /// Layers of the exact-feedback reference evolution checked per run.
  std::size_t reference_layers = 10;
  double dt = 0.05;
  ShadowEnsemble ensemble = ShadowEnsemble::biased();
  std::uint64_t master_seed = 0;

  void validate() const {
    if (sizes.empty() || epsilons.empty()) throw DomainError("sizes and epsilons must be non-empty");
    for (std::size_t n : sizes) {
      if (n < 3) throw DomainError("scaling sizes must be at least 3");
    }
    for (double e : epsilons) {
      if (!(e > 0.0)) throw DomainError("epsilon must be positive");
    }
    if (runs < 1 || reference_layers < 1 || start_rounds < 1 || shots_per_round < 1) {
      throw DomainError("runs, layers, rounds and shots must be at least 1");
    }
    if (!(growth > 1.0)) throw DomainError("growth factor must exceed 1");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
  }
};

/** One row of the results CSV. */
struct Sample {
  std::string mode;
  std::string graph;
  std::size_t n = 0;
  std::size_t num_observables = 0;
  double epsilon_or_err = 0.0;
  std::size_t run = 0;
  double budget_per_layer = 0.0;

  friend bool operator==(const Sample &, const Sample &) = default;
};

/**
 * Smallest budget on the round schedule at which every observable estimate
 * lies within epsilon of its exact value, drawing fresh shadow data at each
 * probe.
 */
template <class URBG>
std::uint64_t required_shadow_budget(const StateVector &psi, std::span<const PauliString> observables,
                                     std::span<const double> exact, double epsilon,
                                     const ScalingRunConfig &cfg, URBG &rng) {
  for (std::size_t m = 0;; ++m) {
    const auto rounds =
        static_cast<std::size_t>(schedule_budget(cfg.start_rounds, cfg.growth, m));
    const std::uint64_t budget = rounds * cfg.shots_per_round;
    if (budget > cfg.max_budget) {
      throw ExhaustionError("per-observable criterion epsilon = " + std::to_string(epsilon) +
                            " not met below max budget " + std::to_string(cfg.max_budget));
    }
    const ShadowData data = collect_shadow(psi, cfg.ensemble, rounds, cfg.shots_per_round, rng);
    bool ok = true;
    for (std::size_t i = 0; i < observables.size() && ok; ++i) {
      ok = std::abs(shadow_expectation(data, cfg.ensemble, observables[i]) - exact[i]) <= epsilon;
    }
    if (ok) return budget;
  }
}

/**
 * For each (size, epsilon, run): evolve the complete graph with exact
 * feedback for reference_layers layers; at every layer find the required
 * per-layer shadow budget for the control observables; record the mean
 * over layers. Each point's engine is seeded from (master_seed, n, epsilon
 * index, run).
 */
inline std::vector<Sample> scaling_run(const ScalingRunConfig &cfg) {
  cfg.validate();
  std::vector<Sample> out;
  for (std::size_t n : cfg.sizes) {
    const Graph g = complete_graph(n);
    const FalqonProblem problem(g);
    const auto &controls = problem.observables.control_terms;

    // exact-feedback reference states and their control expectations
    std::vector<StateVector> states;
    std::vector<std::vector<double>> exact;
    StateVector psi = init_plus_state(n);
    double beta = 0.0;
    for (std::size_t k = 0; k < cfg.reference_layers; ++k) {
      apply_problem_unitary(psi, problem.diagonal, cfg.dt);
      apply_driver_unitary(psi, beta, cfg.dt);
      std::vector<double> vals;
      vals.reserve(controls.size());
      for (const PauliString &p : controls) vals.push_back(exact_expectation(psi, p));
      beta = -control_from_expectations(problem.observables, vals);
      states.push_back(psi);
      exact.push_back(std::move(vals));
    }

    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
      for (std::size_t r = 0; r < cfg.runs; ++r) {
        Rng rng(derive_seed(cfg.master_seed, {n, e, r}));
        double total = 0.0;
        for (std::size_t k = 0; k < states.size(); ++k) {
          total += static_cast<double>(required_shadow_budget(
              states[k], std::span<const PauliString>(controls), std::span<const double>(exact[k]),
              cfg.epsilons[e], cfg, rng));
        }
        out.push_back(Sample{"shadow", "complete:" + std::to_string(n), n, controls.size(),
                             cfg.epsilons[e], r, total / static_cast<double>(states.size())});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logarithmic fit N = A * 4 log10(L) / eps^2 + B

struct FitResult {
  double epsilon = 0.0;
  double a = 0.0;
  double b = 0.0;
  /// Euclidean norm of the residual vector.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Regressor of the logarithmic scaling law.
inline double log_scaling_regressor(double num_observables, double epsilon) {
  return 4.0 * std::log10(num_observables) / (epsilon * epsilon);
}

/** Ordinary least squares y = a x + b. */
inline std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("x and y lengths differ");
  if (x.size() < 2) throw FitError("need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("degenerate design: all regressor values equal");
  const double a = sxy / sxx;
  return {a, my - a * mx};
}

/**
 * Fits every sample group sharing an epsilon, returning one result per
 * epsilon in ascending order. Each sample is one point (L, budget).
 */
inline std::vector<FitResult> fit_log(std::span<const Sample> samples) {
  std::map<double, std::vector<const Sample *>> groups;
  for (const Sample &s : samples) groups[s.epsilon_or_err].push_back(&s);
  if (groups.empty()) throw FitError("no samples to fit");
  std::vector<FitResult> out;
  for (const auto &[eps, group] : groups) {
    std::vector<double> x, y;
    for (const Sample *s : group) {
      if (s->num_observables < 1) throw FitError("sample with no observables");
      x.push_back(log_scaling_regressor(static_cast<double>(s->num_observables), eps));
      y.push_back(s->budget_per_layer);
    }
    const auto distinct = std::count_if(group.begin(), group.end(), [&](const Sample *s) {
      return s->num_observables != group.front()->num_observables;
    });
    if (distinct == 0) {
      throw FitError("epsilon " + std::to_string(eps) + " has a single observable count");
    }
    const auto [a, b] = fit_line(x, y);
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (a * x[i] + b);
      rss += r * r;
    }
    out.push_back(FitResult{eps, a, b, std::sqrt(rss), x.size()});
  }
  return out;
}

/// ceil(max A) over the fits.
inline long ceil_bound(std::span<const FitResult> fits) {
  if (fits.empty()) throw DomainError("ceil_bound needs at least one fit");
  double m = fits.front().a;
  for (const FitResult &f : fits) m = std::max(m, f.a);
  return static_cast<long>(std::ceil(m));
}

// ---------------------------------------------------------------------------
// CSV persistence

inline constexpr const char *kResultsHeader =
    "mode,graph,n,L,epsilon_or_err,run,budget_per_layer";
inline constexpr const char *kFitHeader = "epsilon,A,B,residual";

/// '#'-prefixed key/value lines written ahead of a CSV header.
using ConfigHeader = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::ofstream open_for_write(const std::string &path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open for writing", path);
  return os;
}

inline void write_config(std::ostream &os, const ConfigHeader &header) {
  for (const auto &[k, v] : header) os << "# " << k << " = " << v << '\n';
}

inline std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace detail

inline void write_results_csv(std::ostream &os, std::span<const Sample> samples,
                              const ConfigHeader &header = {}) {
  detail::write_config(os, header);
  os << kResultsHeader << '\n';
  for (const Sample &s : samples) {
    os << s.mode << ',' << s.graph << ',' << s.n << ',' << s.num_observables << ','
       << detail::fmt_double(s.epsilon_or_err) << ',' << s.run << ','
       << detail::fmt_double(s.budget_per_layer) << '\n';
  }
}

/** Writes (overwrites) a results CSV. */
inline void emit_results(const std::string &path, std::span<const Sample> samples,
                         const ConfigHeader &header = {}) {
  auto os = detail::open_for_write(path);
  write_results_csv(os, samples, header);
  if (!os) throw IoError("write failed", path);
}

inline std::vector<Sample> read_results_csv(std::istream &is) {
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kResultsHeader) throw ParseError("unexpected results header", line_no, 0);
      header_seen = true;
      continue;
    }
    const auto cells = detail::split_csv(line);
    if (cells.size() != 7) throw ParseError("expected 7 columns", line_no, 0);
    try {
      Sample s;
      s.mode = cells[0];
      s.graph = cells[1];
      s.n = std::stoull(cells[2]);
      s.num_observables = std::stoull(cells[3]);
      s.epsilon_or_err = std::stod(cells[4]);
      s.run = std::stoull(cells[5]);
      s.budget_per_layer = std::stod(cells[6]);
      out.push_back(std::move(s));
    } catch (const std::exception &) {
      throw ParseError("malformed results row", line_no, 0);
    }
  }
  if (!header_seen) throw ParseError("missing results header", line_no, 0);
  return out;
}

inline std::vector<Sample> load_results(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading", path);
  return read_results_csv(is);
}

inline void write_fit_csv(std::ostream &os, std::span<const FitResult> fits,
                          const ConfigHeader &header = {}) {
  detail::write_config(os, header);
  os << kFitHeader << '\n';
  for (const FitResult &f : fits) {
    os << detail::fmt_double(f.epsilon) << ',' << detail::fmt_double(f.a) << ','
       << detail::fmt_double(f.b) << ',' << detail::fmt_double(f.residual) << '\n';
  }
}

inline void emit_fits(const std::string &path, std::span<const FitResult> fits,
                      const ConfigHeader &header = {}) {
  auto os = detail::open_for_write(path);
  write_fit_csv(os, fits, header);
  if (!os) throw IoError("write failed", path);
}

} // namespace shadowfalqon
