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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/estimators.hpp"
#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/hamiltonian.hpp"
#include "shadowfalqon/seeding.hpp"
#include "shadowfalqon/statevector.hpp"

namespace shadowfalqon {

enum class EstimatorMode { Exact, Direct, Shadow };

inline const char *to_string(EstimatorMode m) {
  switch (m) {
    case EstimatorMode::Exact:
      return "exact";
    case EstimatorMode::Direct:
      return "direct";
    case EstimatorMode::Shadow:
      return "shadow";
  }
  return "?";
}

/// Shots per shadow round used throughout the budget experiments.
inline constexpr std::uint64_t kDefaultShotsPerRound = 128;

struct FalqonConfig {
  double dt = 0.05;
  std::size_t layers = 75;
  /// Feedback gain: beta_{k+1} = -alpha * A_k.
  double alpha = 1.0;
  EstimatorMode mode = EstimatorMode::Exact;
  /// Shots per layer in direct mode.
  std::uint64_t direct_budget = 16384;
  /// Rounds M and shots per round K per layer in shadow mode.
  std::size_t shadow_rounds = 128;
  std::uint64_t shadow_shots = kDefaultShotsPerRound;
  ShadowEnsemble ensemble = ShadowEnsemble::biased();
  /// Stop once |C_k - C_{k-1}| < tolerance on the estimated cost.
  std::optional<double> halt_tolerance;
  std::uint64_t seed = 0;

  /// Measurements one layer consumes (0 in exact mode).
  std::uint64_t budget_per_layer() const {
    switch (mode) {
      case EstimatorMode::Exact:
        return 0;
      case EstimatorMode::Direct:
        return direct_budget;
      case EstimatorMode::Shadow:
        return shadow_rounds * shadow_shots;
    }
    return 0;
  }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (layers < 1) throw DomainError("layers must be at least 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    if (mode == EstimatorMode::Direct && direct_budget < 1) {
      throw DomainError("direct budget must be at least 1");
    }
    if (mode == EstimatorMode::Shadow && (shadow_rounds < 1 || shadow_shots < 1)) {
      throw DomainError("shadow rounds and shots must be at least 1");
    }
    if (halt_tolerance && !(*halt_tolerance > 0.0)) {
      throw DomainError("halt tolerance must be positive");
    }
  }
};

/** One layer of a run. `beta` is the driver strength applied in this layer. */
struct LayerRecord {
  std::size_t layer;
  double beta;
  double a_estimate;
  double cost_estimate;
  double cost_exact;
  std::uint64_t budget;
};

struct FalqonTrace {
  std::vector<LayerRecord> layers;
  StateVector final_state = init_plus_state(1);
  /// beta for the layer after the last recorded one, -alpha * A_last.
  double next_beta = 0.0;

  double final_exact_cost() const { return layers.empty() ? 0.0 : layers.back().cost_exact; }
};

/** Precomputed per-graph data shared by every layer of a run. */
struct FalqonProblem {
  Graph graph;
  ObservableSet observables;
  std::vector<PauliString> measured;  // control terms, then cost terms
  std::vector<double> diagonal;

  explicit FalqonProblem(const Graph &g)
      : graph(g),
        observables(build_observables(g)),
        measured(observables.all_terms()),
        diagonal(dense_problem_hamiltonian(g)) {}
};

struct StepResult {
  double a_estimate;
  double cost_estimate;
  double cost_exact;
  std::uint64_t budget;
};

/**
 * Advances psi by one layer, U_d(beta) U_p, then estimates A and C on the
 * new state from a fresh budget.
 */
template <class Estimator, class URBG>
StepResult step(StateVector &psi, double beta, const FalqonProblem &problem, double dt,
                const Estimator &estimator, URBG &rng) {
  apply_problem_unitary(psi, problem.diagonal, dt);
  apply_driver_unitary(psi, beta, dt);

  const EstimateReport rep =
      estimator.estimate(psi, std::span<const PauliString>(problem.measured), rng);
  const std::size_t n_ctl = problem.observables.control_terms.size();
  const std::span<const double> est(rep.estimates);
  StepResult r;
  r.a_estimate = control_from_expectations(problem.observables, est.first(n_ctl));
  r.cost_estimate = cost_from_expectations(problem.observables, est.subspan(n_ctl));

  double c = 0.0;
  const auto amps = psi.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) c += std::norm(amps[b]) * problem.diagonal[b];
  r.cost_exact = c;
  r.budget = rep.budget;
  return r;
}

/** Feedback loop with an explicit estimator. */
template <class Estimator, class URBG>
FalqonTrace run_falqon_with(const FalqonProblem &problem, const FalqonConfig &cfg,
                            const Estimator &estimator, URBG &rng) {
  cfg.validate();
  FalqonTrace trace{{}, init_plus_state(problem.graph.num_vertices()), 0.0};
  trace.layers.reserve(cfg.layers);
  double beta = 0.0;
  for (std::size_t k = 1; k <= cfg.layers; ++k) {
    const StepResult r = step(trace.final_state, beta, problem, cfg.dt, estimator, rng);
    trace.layers.push_back({k, beta, r.a_estimate, r.cost_estimate, r.cost_exact, r.budget});
    beta = -cfg.alpha * r.a_estimate;
    if (cfg.halt_tolerance && k >= 2) {
      const double prev = trace.layers[k - 2].cost_estimate;
      if (std::abs(prev - r.cost_estimate) < *cfg.halt_tolerance) break;
    }
  }
  trace.next_beta = beta;
  return trace;
}

using AnyEstimator = std::variant<ExactEstimator, DirectEstimator, ShadowEstimator>;

inline AnyEstimator make_estimator(const FalqonConfig &cfg) {
  switch (cfg.mode) {
    case EstimatorMode::Direct:
      return DirectEstimator{cfg.direct_budget};
    case EstimatorMode::Shadow:
      return ShadowEstimator{cfg.ensemble, cfg.shadow_rounds, cfg.shadow_shots};
    case EstimatorMode::Exact:
      break;
  }
  return ExactEstimator{};
}

template <class URBG>
FalqonTrace run_falqon(const FalqonProblem &problem, const FalqonConfig &cfg, URBG &rng) {
  const AnyEstimator est = make_estimator(cfg);
  return std::visit([&](const auto &e) { return run_falqon_with(problem, cfg, e, rng); }, est);
}

template <class URBG>
FalqonTrace run_falqon(const Graph &g, const FalqonConfig &cfg, URBG &rng) {
  return run_falqon(FalqonProblem(g), cfg, rng);
}

/// Runs with a fresh engine seeded from cfg.seed.
inline FalqonTrace run_falqon(const Graph &g, const FalqonConfig &cfg) {
  Rng rng(cfg.seed);
  return run_falqon(g, cfg, rng);
}

/** Expected cut of the final state over the exact maximum cut. */
inline double approximation_ratio(const FalqonTrace &trace, const Graph &g) {
  const auto best = max_cut_brute_force(g);
  if (best.cut_value == 0) throw DomainError("graph has no edges to cut");
  return -trace.final_exact_cost() / static_cast<double>(best.cut_value);
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

/** Writes the per-layer trace CSV: layer,beta,A_est,C_est,C_exact,budget. */
inline void write_trace_csv(std::ostream &os, const FalqonTrace &trace) {
  os << "layer,beta,A_est,C_est,C_exact,budget\n";
  for (const LayerRecord &r : trace.layers) {
    os << r.layer << ',' << detail::fmt_double(r.beta) << ',' << detail::fmt_double(r.a_estimate)
       << ',' << detail::fmt_double(r.cost_estimate) << ',' << detail::fmt_double(r.cost_exact)
       << ',' << r.budget << '\n';
  }
}

} // namespace shadowfalqon
