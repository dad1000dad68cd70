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

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowfalqon/shadowfalqon.hpp"

namespace shadowfalqon::cli {

/** Resolves cycle:<n>, complete:<n> or file:<path>. */
inline Graph resolve_graph(const std::string &spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw DomainError("graph must be cycle:<n>, complete:<n> or file:<path>, got '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "file") {
    std::ifstream is(arg);
    if (!is) throw IoError("cannot open graph file", arg);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_edge_list(ss.str());
  }
  std::size_t pos = 0;
  unsigned long n = 0;
  try {
    n = std::stoul(arg, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != arg.size()) throw DomainError("bad vertex count in '" + spec + "'");
  if (kind == "cycle") return cycle_graph(n);
  if (kind == "complete") return complete_graph(n);
  throw DomainError("unknown graph kind '" + kind + "'");
}

inline EstimatorMode parse_mode(const std::string &s) {
  if (s == "exact") return EstimatorMode::Exact;
  if (s == "direct") return EstimatorMode::Direct;
  if (s == "shadow") return EstimatorMode::Shadow;
  throw DomainError("unknown mode '" + s + "'");
}

inline ShadowEnsemble parse_ensemble(const std::string &s) {
  if (s == "uniform") return ShadowEnsemble::uniform();
  if (s == "biased") return ShadowEnsemble::biased();
  throw DomainError("unknown ensemble '" + s + "'");
}

struct Options {
  std::string graph = "cycle:4";
  std::string mode = "exact";
  std::string ensemble = "biased";
  double dt = 0.05;
  std::size_t layers = 75;
  double alpha = 1.0;
  double err = 0.01;
  std::vector<double> epsilons;
  std::size_t rounds = 128;
  std::uint64_t shots = kDefaultShotsPerRound;
  std::uint64_t budget = 16384;
  std::uint64_t start_budget = 1024;
  std::uint64_t max_budget = std::uint64_t{1} << 22;
  std::size_t runs = 0;
  std::vector<std::size_t> sizes{4, 5, 6, 7, 8};
  std::size_t reference_layers = 10;
  double halt = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string in;
};

inline ConfigHeader common_header(const Options &o) {
  return {{"seed", std::to_string(o.seed)},
          {"dt", detail::fmt_double(o.dt)},
          {"layers", std::to_string(o.layers)},
          {"K", std::to_string(o.shots)}};
}

inline FalqonConfig falqon_config(const Options &o) {
  FalqonConfig cfg;
  cfg.dt = o.dt;
  cfg.layers = o.layers;
  cfg.alpha = o.alpha;
  cfg.mode = parse_mode(o.mode);
  cfg.direct_budget = o.budget;
  cfg.shadow_rounds = o.rounds;
  cfg.shadow_shots = o.shots;
  cfg.ensemble = parse_ensemble(o.ensemble);
  if (o.halt > 0.0) cfg.halt_tolerance = o.halt;
  cfg.seed = o.seed;
  return cfg;
}

inline int cmd_run(const Options &o, std::ostream &out) {
  const Graph g = resolve_graph(o.graph);
  const FalqonConfig cfg = falqon_config(o);
  const FalqonTrace trace = run_falqon(g, cfg);
  if (!o.out.empty()) {
    std::ofstream os(o.out, std::ios::trunc);
    if (!os) throw IoError("cannot open for writing", o.out);
    write_trace_csv(os, trace);
    if (!os) throw IoError("write failed", o.out);
  } else {
    write_trace_csv(out, trace);
  }
  if (g.num_vertices() <= kMaxExhaustiveVertices) {
    out << "layers " << trace.layers.size() << " final_C " << detail::fmt_double(trace.final_exact_cost())
        << " approximation_ratio " << detail::fmt_double(approximation_ratio(trace, g)) << '\n';
  }
  return 0;
}

inline int cmd_budget(const Options &o, std::ostream &out, std::ostream &err) {
  const Graph g = resolve_graph(o.graph);
  std::vector<Sample> rows;
  bool exhausted = false;
  out << "mode,budget_per_layer,mean_delta_C,found\n";
  for (EstimatorMode mode : {EstimatorMode::Shadow, EstimatorMode::Direct}) {
    BudgetSearchConfig cfg{g, falqon_config(o)};
    cfg.falqon.mode = mode;
    cfg.err = o.err;
    cfg.start_budget = o.start_budget;
    cfg.max_budget = o.max_budget;
    cfg.repetitions = o.runs == 0 ? 3 : o.runs;
    cfg.master_seed = o.seed;
    const BudgetSearchResult r = budget_search(cfg);
    out << to_string(mode) << ',' << r.budget << ','
        << detail::fmt_double(r.probes.back().mean_error) << ',' << (r.found ? "yes" : "no")
        << '\n';
    if (!r.found) {
      err << "budget search exhausted for " << to_string(mode) << " mode at " << r.budget
          << " measurements per layer\n";
      exhausted = true;
    }
    const auto counts = operator_counts(g);
    rows.push_back(Sample{to_string(mode), o.graph, g.num_vertices(), counts.n_beta + counts.n_cost,
                          o.err, 0, static_cast<double>(r.budget)});
  }
  if (!o.out.empty()) {
    auto header = common_header(o);
    header.emplace_back("repetitions", std::to_string(o.runs == 0 ? 3 : o.runs));
    emit_results(o.out, rows, header);
  }
  return exhausted ? 3 : 0;
}

inline int cmd_scaling(const Options &o, std::ostream &out) {
  ScalingRunConfig cfg;
  cfg.sizes = o.sizes;
  if (!o.epsilons.empty()) cfg.epsilons = o.epsilons;
  cfg.runs = o.runs == 0 ? 10 : o.runs;
  cfg.shots_per_round = o.shots;
  cfg.max_budget = o.max_budget;
  cfg.reference_layers = o.reference_layers;
  cfg.dt = o.dt;
  cfg.ensemble = parse_ensemble(o.ensemble);
  cfg.master_seed = o.seed;
  const auto samples = scaling_run(cfg);
  auto header = common_header(o);
  header.emplace_back("runs", std::to_string(cfg.runs));
  header.emplace_back("reference_layers", std::to_string(cfg.reference_layers));
  if (!o.out.empty()) {
    emit_results(o.out, samples, header);
  } else {
    write_results_csv(out, samples, header);
  }
  return 0;
}

inline int cmd_fit(const Options &o, std::ostream &out) {
  if (o.in.empty()) throw DomainError("fit needs --in <samples.csv>");
  const auto samples = load_results(o.in);
  const auto fits = fit_log(samples);
  write_fit_csv(out, fits);
  out << "ceil_A " << ceil_bound(fits) << '\n';
  std::string dest = o.out;
  if (dest.empty()) {
    const auto dot = o.in.rfind('.');
    dest = (dot == std::string::npos ? o.in : o.in.substr(0, dot)) + "_fit.csv";
  }
  emit_fits(dest, fits, {{"source", o.in}});
  return 0;
}

/** Parses argv, runs one subcommand, returns the process exit status. */
inline int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out = std::cout,
                              std::ostream &err = std::cerr) {
  CLI::App app{"FALQON MaxCut simulator with direct and classical-shadow estimators"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_graph = [&](CLI::App *c) {
    c->add_option("--graph", o.graph, "cycle:<n>, complete:<n> or file:<path>");
  };
  auto add_dynamics = [&](CLI::App *c) {
    c->add_option("--dt", o.dt, "Trotter time step");
    c->add_option("--layers", o.layers, "layer count");
    c->add_option("--alpha", o.alpha, "feedback gain");
  };
  auto add_shadow = [&](CLI::App *c) {
    c->add_option("--ensemble", o.ensemble, "uniform or biased")
        ->check(CLI::IsMember({"uniform", "biased"}));
    c->add_option("--K", o.shots, "shots per shadow round");
  };

  CLI::App *run = app.add_subcommand("run", "run FALQON and write a trace CSV");
  add_graph(run);
  add_dynamics(run);
  add_shadow(run);
  run->add_option("--mode", o.mode, "exact, direct or shadow")
      ->check(CLI::IsMember({"exact", "direct", "shadow"}));
  run->add_option("--M", o.rounds, "shadow rounds per layer");
  run->add_option("--budget", o.budget, "direct shots per layer");
  run->add_option("--halt", o.halt, "stop when successive costs differ by less than this");
  run->add_option("--seed", o.seed, "random seed");
  run->add_option("--out", o.out, "trace CSV path (stdout if omitted)");

  CLI::App *budget = app.add_subcommand("budget", "budget-doubling search for both estimators");
  add_graph(budget);
  add_dynamics(budget);
  add_shadow(budget);
  budget->add_option("--err", o.err, "mean cost-error threshold");
  budget->add_option("--budget", o.start_budget, "first budget probed");
  budget->add_option("--max-budget", o.max_budget, "largest budget probed");
  budget->add_option("--runs", o.runs, "repetitions per budget (default 3)");
  budget->add_option("--seed", o.seed, "master seed");
  budget->add_option("--out", o.out, "results CSV path");

  CLI::App *scaling = app.add_subcommand("scaling", "complete-graph scaling experiment");
  add_shadow(scaling);
  scaling->add_option("--dt", o.dt, "Trotter time step");
  scaling->add_option("--layers", o.reference_layers, "reference layers checked per run");
  scaling->add_option("--epsilon", o.epsilons, "per-observable error target (repeatable)");
  scaling->add_option("--sizes", o.sizes, "complete-graph sizes")->delimiter(',');
  scaling->add_option("--max-budget", o.max_budget, "largest budget probed");
  scaling->add_option("--runs", o.runs, "runs per point (default 10)");
  scaling->add_option("--seed", o.seed, "master seed");
  scaling->add_option("--out", o.out, "results CSV path (stdout if omitted)");

  CLI::App *fit = app.add_subcommand("fit", "fit the logarithmic scaling law to a samples CSV");
  fit->add_option("--in", o.in, "samples CSV")->required();
  fit->add_option("--out", o.out, "fit CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (budget->parsed()) return cmd_budget(o, out, err);
    if (scaling->parsed()) {
      o.layers = o.reference_layers;
      return cmd_scaling(o, out);
    }
    if (fit->parsed()) return cmd_fit(o, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

} // namespace shadowfalqon::cli
