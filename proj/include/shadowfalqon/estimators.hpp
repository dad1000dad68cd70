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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/pauli.hpp"
#include "shadowfalqon/statevector.hpp"

namespace shadowfalqon {

/**
 * Local random-Pauli measurement ensemble. Every qubit independently draws
 * its basis uniformly from `allowed`. The inverse of the resulting
 * measurement channel on a supported single-qubit Pauli is the factor
 * |allowed|: 3 for the full {X, Y, Z} ensemble, 2 for the X-free {Y, Z}
 * ensemble (a pseudo-inverse there, since X components are discarded).
 */
class ShadowEnsemble {
 public:
  explicit ShadowEnsemble(std::vector<Pauli> allowed) : allowed_(std::move(allowed)) {
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
    if (allowed_.empty()) throw DomainError("shadow ensemble needs at least one basis");
    for (Pauli p : allowed_) {
      if (p == Pauli::I) throw DomainError("identity is not a measurement basis");
    }
  }

  static ShadowEnsemble uniform() { return ShadowEnsemble({Pauli::X, Pauli::Y, Pauli::Z}); }
  static ShadowEnsemble biased() { return ShadowEnsemble({Pauli::Y, Pauli::Z}); }

  const std::vector<Pauli> &allowed_bases() const { return allowed_; }
  double inverse_factor() const { return static_cast<double>(allowed_.size()); }

  bool allows(Pauli p) const {
    return std::find(allowed_.begin(), allowed_.end(), p) != allowed_.end();
  }

  /// True when every non-identity label of p can be measured.
  bool supports(const PauliString &p) const {
    for (Pauli a : p.axes()) {
      if (a != Pauli::I && !allows(a)) return false;
    }
    return true;
  }

  std::string label() const {
    std::string s;
    for (Pauli p : allowed_) s.push_back(to_char(p));
    return s;
  }

  friend bool operator==(const ShadowEnsemble &, const ShadowEnsemble &) = default;

 private:
  std::vector<Pauli> allowed_;
};

/// Sparse histogram entry: (basis-state index, count).
using OutcomeCount = std::pair<std::uint64_t, std::uint64_t>;

/** One randomized measurement round: a basis draw and its K outcomes. */
struct ShadowRecord {
  BasisAssignment basis;
  /// Non-zero counts only, ascending by index.
  std::vector<OutcomeCount> outcomes;

  std::uint64_t shots() const {
    std::uint64_t s = 0;
    for (const auto &[idx, c] : outcomes) s += c;
    return s;
  }
};

/** Classical-shadow measurement record: M rounds of K shots each. */
struct ShadowData {
  std::size_t num_qubits = 0;
  std::uint64_t shots_per_round = 0;
  std::vector<ShadowRecord> records;

  std::size_t rounds() const { return records.size(); }
  std::uint64_t total_measurements() const { return records.size() * shots_per_round; }
};

/** Per-observable estimates plus what they cost. */
struct EstimateReport {
  std::vector<double> estimates;
  /// Shots that contributed a non-zero term to each estimate.
  std::vector<std::uint64_t> samples_used;
  /// Total measurements consumed.
  std::uint64_t budget = 0;
  /// Distinct measurement settings (basis assignments) used; shadows report rounds.
  std::size_t settings = 0;
};

namespace detail {

inline std::vector<OutcomeCount> to_sparse(const OutcomeCounts &dense) {
  std::vector<OutcomeCount> out;
  for (std::size_t b = 0; b < dense.size(); ++b) {
    if (dense[b] != 0) out.emplace_back(b, dense[b]);
  }
  return out;
}

inline bool basis_matches(const BasisAssignment &basis, const PauliString &p) {
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    if (p[q] != Pauli::I && p[q] != basis[q]) return false;
  }
  return true;
}

inline void require_supported(const ShadowEnsemble &ensemble, const PauliString &p) {
  if (!ensemble.supports(p)) {
    throw UnsupportedObservableError("observable " + p.label() +
                                     " has a label outside the ensemble {" + ensemble.label() +
                                     "}");
  }
}

} // namespace detail

/** Collects M rounds of K shots, one fresh random basis assignment per round. */
template <class URBG>
ShadowData collect_shadow(const StateVector &psi, const ShadowEnsemble &ensemble,
                          std::size_t rounds, std::uint64_t shots_per_round, URBG &rng) {
  if (rounds < 1) throw DomainError("shadow collection needs at least one round");
  if (shots_per_round < 1) throw DomainError("shadow collection needs at least one shot");
  const std::size_t n = psi.num_qubits();
  const auto &allowed = ensemble.allowed_bases();
  std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);

  // When rounds outnumber the distinct basis assignments, each assignment's
  // Born distribution is computed once and reused.
  const std::size_t dim = psi.dimension();
  std::size_t num_bases = 1;
  bool cacheable = true;
  for (std::size_t q = 0; q < n && cacheable; ++q) {
    cacheable = num_bases <= (std::size_t{1} << 22) / dim / allowed.size();
    num_bases *= allowed.size();
  }
  cacheable = cacheable && num_bases <= rounds;
  std::vector<std::vector<double>> cache(cacheable ? num_bases : 0);

  ShadowData data;
  data.num_qubits = n;
  data.shots_per_round = shots_per_round;
  data.records.reserve(rounds);
  std::vector<double> fresh;
  for (std::size_t m = 0; m < rounds; ++m) {
    std::vector<Pauli> bases(n);
    std::size_t key = 0;
    for (Pauli &b : bases) {
      const std::size_t c = pick(rng);
      b = allowed[c];
      key = key * allowed.size() + c;
    }
    BasisAssignment basis(std::move(bases));
    const std::vector<double> *probs = &fresh;
    if (cacheable) {
      if (cache[key].empty()) cache[key] = born_probabilities(psi, basis);
      probs = &cache[key];
    } else {
      fresh = born_probabilities(psi, basis);
    }
    const auto counts = sample_counts(std::span<const double>(*probs), shots_per_round, rng);
    data.records.push_back(ShadowRecord{std::move(basis), detail::to_sparse(counts)});
  }
  return data;
}

/**
 * Value of the single-snapshot estimator Tr(P rho_hat) for one measured
 * bitstring: prod over the support of factor * s_q when every support
 * qubit was measured in p's basis (s_q = +1 for bit 0, -1 for bit 1), and 0
 * otherwise.
 */
inline double snapshot_value(const ShadowEnsemble &ensemble, const BasisAssignment &basis,
                             std::uint64_t outcome, const PauliString &p) {
  detail::require_supported(ensemble, p);
  if (!detail::basis_matches(basis, p)) return 0.0;
  double v = 1.0;
  const std::size_t n = p.num_qubits();
  for (std::size_t q = 0; q < n; ++q) {
    if (p[q] == Pauli::I) continue;
    const bool one = (outcome >> (n - 1 - q)) & 1U;
    v *= one ? -ensemble.inverse_factor() : ensemble.inverse_factor();
  }
  return v;
}

namespace detail {

inline double shadow_mean(std::span<const ShadowRecord> records, std::uint64_t total,
                          const ShadowEnsemble &ensemble, const PauliString &p) {
  const std::uint64_t mask = p.support_mask();
  double scale = 1.0;
  for (std::size_t w = p.weight(); w > 0; --w) scale *= ensemble.inverse_factor();
  // Integer accumulation keeps the result independent of record grouping.
  std::int64_t sum = 0;
  for (const ShadowRecord &r : records) {
    if (!basis_matches(r.basis, p)) continue;
    for (const auto &[idx, c] : r.outcomes) {
      const auto sc = static_cast<std::int64_t>(c);
      sum += (std::popcount(idx & mask) & 1U) ? -sc : sc;
    }
  }
  return scale * static_cast<double>(sum) / static_cast<double>(total);
}

/// Pools the outcome counts of rounds that share a basis assignment.
inline std::vector<ShadowRecord> pool_by_basis(const ShadowData &data) {
  std::map<std::vector<Pauli>, std::vector<std::pair<std::uint64_t, std::uint64_t>>> groups;
  for (const ShadowRecord &r : data.records) {
    auto &g = groups[r.basis.bases()];
    g.insert(g.end(), r.outcomes.begin(), r.outcomes.end());
  }
  std::vector<ShadowRecord> out;
  out.reserve(groups.size());
  for (auto &[bases, counts] : groups) {
    std::sort(counts.begin(), counts.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
    for (const auto &[idx, c] : counts) {
      if (!merged.empty() && merged.back().first == idx) {
        merged.back().second += c;
      } else {
        merged.emplace_back(idx, c);
      }
    }
    out.push_back(ShadowRecord{BasisAssignment(bases), std::move(merged)});
  }
  return out;
}

inline void check_shadow_input(const ShadowData &data, const ShadowEnsemble &ensemble,
                               const PauliString &p) {
  require_supported(ensemble, p);
  if (p.num_qubits() != data.num_qubits) {
    throw DomainError("observable qubit count does not match shadow data");
  }
  if (data.total_measurements() == 0) throw DomainError("shadow data is empty");
}

} // namespace detail

/// Mean of the snapshot estimator over all M*K shots in `data`.
inline double shadow_expectation(const ShadowData &data, const ShadowEnsemble &ensemble,
                                 const PauliString &p) {
  detail::check_shadow_input(data, ensemble, p);
  return detail::shadow_mean(data.records, data.total_measurements(), ensemble, p);
}

/** Estimates every observable from the same data set; the budget is M*K whatever their count. */
inline EstimateReport shadow_expectations(const ShadowData &data, const ShadowEnsemble &ensemble,
                                          std::span<const PauliString> observables) {
  EstimateReport rep;
  rep.budget = data.total_measurements();
  rep.settings = data.rounds();
  rep.estimates.reserve(observables.size());
  rep.samples_used.reserve(observables.size());
  if (observables.empty()) return rep;
  for (const PauliString &p : observables) detail::check_shadow_input(data, ensemble, p);
  const std::vector<ShadowRecord> pooled = detail::pool_by_basis(data);
  for (const PauliString &p : observables) {
    rep.estimates.push_back(detail::shadow_mean(pooled, rep.budget, ensemble, p));
    std::uint64_t used = 0;
    for (const ShadowRecord &r : pooled) {
      if (detail::basis_matches(r.basis, p)) used += r.shots();
    }
    rep.samples_used.push_back(used);
  }
  return rep;
}

/**
 * Measurement settings for direct estimation: one per distinct observable
 * that contains X or Y (in order of first appearance), then one shared
 * computational-basis setting for all Z-only observables if any exist.
 */
struct DirectPlan {
  std::vector<BasisAssignment> settings;
  /// setting_of[i] is the setting index measuring observable i.
  std::vector<std::size_t> setting_of;
};

inline DirectPlan plan_direct(std::span<const PauliString> observables) {
  DirectPlan plan;
  plan.setting_of.resize(observables.size());
  std::vector<std::size_t> z_only;
  std::vector<const PauliString *> distinct;
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const PauliString &p = observables[i];
    if (!p.contains(Pauli::X) && !p.contains(Pauli::Y)) {
      z_only.push_back(i);
      continue;
    }
    auto it = std::find_if(distinct.begin(), distinct.end(),
                           [&](const PauliString *d) { return *d == p; });
    if (it != distinct.end()) {
      plan.setting_of[i] = static_cast<std::size_t>(it - distinct.begin());
    } else {
      plan.setting_of[i] = distinct.size();
      distinct.push_back(&p);
      plan.settings.push_back(BasisAssignment::for_observable(p));
    }
  }
  if (!z_only.empty()) {
    const std::size_t z = plan.settings.size();
    plan.settings.push_back(BasisAssignment::computational(observables[z_only.front()].num_qubits()));
    for (std::size_t i : z_only) plan.setting_of[i] = z;
  }
  return plan;
}

/**
 * Direct per-observable estimation. The budget is split evenly over the
 * settings of plan_direct (remainder to the earliest settings) and each
 * estimate is the empirical mean of the +-1 parity over its setting's shots.
 */
template <class URBG>
EstimateReport direct_estimate(const StateVector &psi, std::span<const PauliString> observables,
                               std::uint64_t total_budget, URBG &rng) {
  for (const PauliString &p : observables) {
    if (p.num_qubits() != psi.num_qubits()) {
      throw DomainError("observable qubit count does not match state");
    }
  }
  const DirectPlan plan = plan_direct(observables);
  const std::size_t s = plan.settings.size();
  EstimateReport rep;
  rep.settings = s;
  if (s == 0) return rep;
  if (total_budget < s) {
    throw BudgetError("budget " + std::to_string(total_budget) + " is smaller than the " +
                      std::to_string(s) + " measurement settings");
  }
  std::vector<OutcomeCounts> counts;
  std::vector<std::uint64_t> shots(s);
  counts.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    shots[k] = total_budget / s + (k < total_budget % s ? 1 : 0);
    counts.push_back(sample_bitstrings(psi, plan.settings[k], shots[k], rng));
  }
  rep.budget = total_budget;
  rep.estimates.reserve(observables.size());
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const std::size_t k = plan.setting_of[i];
    const std::uint64_t mask = observables[i].support_mask();
    std::int64_t acc = 0;
    const OutcomeCounts &c = counts[k];
    for (std::size_t b = 0; b < c.size(); ++b) {
      if (c[b] == 0) continue;
      const auto v = static_cast<std::int64_t>(c[b]);
      acc += (std::popcount(b & mask) & 1U) ? -v : v;
    }
    rep.estimates.push_back(static_cast<double>(acc) / static_cast<double>(shots[k]));
    rep.samples_used.push_back(shots[k]);
  }
  return rep;
}

// Pluggable estimators for the feedback loop. Each turns a state and an
// observable list into an EstimateReport from a fresh budget.

/** Exact expectations; consumes no measurements. */
struct ExactEstimator {
  template <class URBG>
  EstimateReport estimate(const StateVector &psi, std::span<const PauliString> observables,
                          URBG &) const {
    EstimateReport rep;
    for (const PauliString &p : observables) {
      rep.estimates.push_back(exact_expectation(psi, p));
      rep.samples_used.push_back(0);
    }
    return rep;
  }
};

struct DirectEstimator {
  std::uint64_t budget;

  template <class URBG>
  EstimateReport estimate(const StateVector &psi, std::span<const PauliString> observables,
                          URBG &rng) const {
    return direct_estimate(psi, observables, budget, rng);
  }
};

struct ShadowEstimator {
  ShadowEnsemble ensemble;
  std::size_t rounds;
  std::uint64_t shots_per_round;

  template <class URBG>
  EstimateReport estimate(const StateVector &psi, std::span<const PauliString> observables,
                          URBG &rng) const {
    for (const PauliString &p : observables) detail::require_supported(ensemble, p);
    const ShadowData data = collect_shadow(psi, ensemble, rounds, shots_per_round, rng);
    return shadow_expectations(data, ensemble, observables);
  }
};

// ShadowData record file, version 1:
//
//   # shadowfalqon shadow-data v1
//   qubits <n> shots <K> rounds <M> ensemble <labels>
//   <basis labels> <bitstring>:<count> <bitstring>:<count> ...   (one line per round)
//
// Bitstrings list qubit 0 first; only non-zero counts appear, ascending.

inline constexpr const char *kShadowDataMagic = "# shadowfalqon shadow-data v1";

inline void write_shadow_data(std::ostream &os, const ShadowData &data,
                              const ShadowEnsemble &ensemble) {
  os << kShadowDataMagic << '\n';
  os << "qubits " << data.num_qubits << " shots " << data.shots_per_round << " rounds "
     << data.rounds() << " ensemble " << ensemble.label() << '\n';
  for (const ShadowRecord &r : data.records) {
    os << r.basis.label();
    for (const auto &[idx, c] : r.outcomes) os << ' ' << outcome_label(idx, data.num_qubits) << ':' << c;
    os << '\n';
  }
}

struct LoadedShadowData {
  ShadowData data;
  ShadowEnsemble ensemble;
};

inline LoadedShadowData read_shadow_data(std::istream &is) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line) || line != kShadowDataMagic) {
    throw ParseError("missing shadow-data v1 header", 1, 0);
  }
  ++line_no;
  if (!std::getline(is, line)) throw ParseError("missing shadow-data size line", line_no, 0);
  std::istringstream head(line);
  std::string k1, k2, k3, k4, ens;
  std::size_t n = 0, rounds = 0;
  std::uint64_t shots = 0;
  if (!(head >> k1 >> n >> k2 >> shots >> k3 >> rounds >> k4 >> ens) || k1 != "qubits" ||
      k2 != "shots" || k3 != "rounds" || k4 != "ensemble") {
    throw ParseError("malformed shadow-data size line", line_no, 0);
  }
  std::vector<Pauli> allowed;
  for (char c : ens) allowed.push_back(pauli_from_label(std::string(1, c))[0]);
  LoadedShadowData out{ShadowData{n, shots, {}}, ShadowEnsemble(std::move(allowed))};
  out.data.records.reserve(rounds);
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string basis_label;
    ss >> basis_label;
    PauliString b = pauli_from_label(basis_label);
    if (b.num_qubits() != n) throw ParseError("basis length mismatch", line_no, 0);
    ShadowRecord rec{BasisAssignment(b.axes()), {}};
    for (std::string tok; ss >> tok;) {
      const auto colon = tok.find(':');
      if (colon != n) throw ParseError("malformed outcome '" + tok + "'", line_no, 0);
      std::uint64_t idx = 0;
      for (std::size_t q = 0; q < n; ++q) {
        if (tok[q] != '0' && tok[q] != '1') throw ParseError("bad bit in '" + tok + "'", line_no, q);
        idx = (idx << 1) | static_cast<std::uint64_t>(tok[q] - '0');
      }
      std::uint64_t c = 0;
      try {
        c = std::stoull(tok.substr(colon + 1));
      } catch (const std::exception &) {
        throw ParseError("bad count in '" + tok + "'", line_no, colon + 1);
      }
      rec.outcomes.emplace_back(idx, c);
    }
    if (rec.shots() != shots) throw ParseError("round shot count mismatch", line_no, 0);
    out.data.records.push_back(std::move(rec));
  }
  if (out.data.records.size() != rounds) {
    throw ParseError("expected " + std::to_string(rounds) + " rounds, found " +
                         std::to_string(out.data.records.size()),
                     line_no, 0);
  }
  return out;
}

} // namespace shadowfalqon
