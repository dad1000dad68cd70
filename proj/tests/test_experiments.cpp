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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "shadowfalqon/experiments.hpp"

using namespace shadowfalqon;

namespace {

std::vector<Sample> synthetic(double a, double b, std::vector<double> eps) {
  std::vector<Sample> out;
  for (double e : eps) {
    for (std::size_t n = 4; n <= 8; ++n) {
      const std::size_t l = n * (n - 1);
      out.push_back({"shadow", "complete:" + std::to_string(n), n, l, e, 0,
                     a * log_scaling_regressor(static_cast<double>(l), e) + b});
    }
  }
  return out;
}

std::vector<double> ranks(const std::vector<double> &v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST(Schedule, Geometric) {
  EXPECT_EQ(schedule_budget(1024, 2.0, 0), 1024u);
  EXPECT_EQ(schedule_budget(1024, 2.0, 4), 16384u);
  EXPECT_EQ(schedule_budget(3, 1.5, 2), 7u);
}

TEST(BudgetSearch, HugeToleranceReturnsStart) {
  for (EstimatorMode mode : {EstimatorMode::Direct, EstimatorMode::Shadow}) {
    BudgetSearchConfig cfg{cycle_graph(4), {}};
    cfg.falqon.mode = mode;
    cfg.falqon.layers = 10;
    cfg.err = 1e9;
    cfg.start_budget = 256;
    const auto res = budget_search(cfg);
    EXPECT_TRUE(res.found);
    EXPECT_EQ(res.budget, 256u);
    EXPECT_EQ(res.probes.size(), 1u);
  }
}

TEST(BudgetSearch, ResultLiesOnScheduleAndIsFirstPassing) {
  BudgetSearchConfig cfg{cycle_graph(4), {}};
  cfg.falqon.mode = EstimatorMode::Direct;
  cfg.falqon.layers = 20;
  cfg.err = 0.05;
  cfg.start_budget = 64;
  cfg.master_seed = 3;
  const auto res = budget_search(cfg);
  ASSERT_TRUE(res.found);
  bool on_schedule = false;
  for (std::size_t m = 0; m < 40; ++m) on_schedule |= schedule_budget(64, 2.0, m) == res.budget;
  EXPECT_TRUE(on_schedule);
  for (std::size_t i = 0; i + 1 < res.probes.size(); ++i) EXPECT_GT(res.probes[i].mean_error, cfg.err);
  EXPECT_LE(res.probes.back().mean_error, cfg.err);
  EXPECT_EQ(res.probes.back().errors.size(), 3u);

  // rerunning from the passing budget returns it immediately
  cfg.start_budget = res.budget;
  const auto again = budget_search(cfg);
  EXPECT_EQ(again.budget, res.budget);
}

TEST(BudgetSearch, ExhaustionAndValidation) {
  BudgetSearchConfig cfg{cycle_graph(4), {}};
  cfg.falqon.mode = EstimatorMode::Direct;
  cfg.falqon.layers = 5;
  cfg.err = 1e-9;
  cfg.start_budget = 64;
  cfg.max_budget = 256;
  cfg.repetitions = 1;
  const auto res = budget_search(cfg);
  EXPECT_FALSE(res.found);
  EXPECT_EQ(res.budget, 256u);

  cfg.falqon.mode = EstimatorMode::Exact;
  EXPECT_THROW(budget_search(cfg), DomainError);
  cfg.falqon.mode = EstimatorMode::Shadow;
  cfg.start_budget = 100;  // not a multiple of K = 128
  EXPECT_THROW(budget_search(cfg), DomainError);
}

TEST(MeanCostError, UsesReferenceExactCost) {
  FalqonTrace est, ref;
  est.layers = {{1, 0, 0, -1.0, -1.5, 0}, {2, 0, 0, -2.0, -1.0, 0}};
  ref.layers = {{1, 0, 0, 0, -1.25, 0}, {2, 0, 0, 0, -2.5, 0}, {3, 0, 0, 0, -3.0, 0}};
  EXPECT_DOUBLE_EQ(mean_cost_error(est, ref), (0.25 + 0.5) / 2.0);
  EXPECT_THROW(mean_cost_error(FalqonTrace{}, ref), DomainError);
}

TEST(FitLog, RecoversReferenceCoefficients) {
  const auto fits = fit_log(synthetic(4.5, 286.0, {0.075}));
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_NEAR(fits[0].a, 4.5, 1e-6);
  EXPECT_NEAR(fits[0].b, 286.0, 1e-6);
  EXPECT_EQ(fits[0].points, 5u);
}

TEST(FitLog, RecoversRandomCoefficients) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> da(0.5, 10.0), db(-2000.0, 2000.0);
  for (int i = 0; i < 10; ++i) {
    const double a = da(rng), b = db(rng);
    const auto fits = fit_log(synthetic(a, b, {0.05, 0.1}));
    ASSERT_EQ(fits.size(), 2u);
    EXPECT_DOUBLE_EQ(fits[0].epsilon, 0.05);
    for (const auto &f : fits) {
      EXPECT_NEAR(f.a, a, 1e-6);
      EXPECT_NEAR(f.b, b, 1e-6);
    }
  }
}

TEST(FitLog, TwoPointsInterpolateAndDegenerateFails) {
  std::vector<Sample> two{{"shadow", "a", 4, 12, 0.1, 0, 5000.0}, {"shadow", "b", 6, 30, 0.1, 0, 7000.0}};
  const auto fits = fit_log(two);
  EXPECT_NEAR(fits[0].residual, 0.0, 1e-9);

  std::vector<Sample> same{{"shadow", "a", 4, 12, 0.1, 0, 5000.0}, {"shadow", "a", 4, 12, 0.1, 1, 6000.0}};
  EXPECT_THROW(fit_log(same), FitError);
  EXPECT_THROW(fit_log(std::vector<Sample>{}), FitError);
}

TEST(CeilBound, ReferenceValues) {
  auto fits = [](std::vector<double> as) {
    std::vector<FitResult> out;
    for (double a : as) out.push_back({0.1, a, 0.0, 0.0, 2});
    return out;
  };
  EXPECT_EQ(ceil_bound(fits({4.533, 4.458, 4.500, 3.866})), 5);
  EXPECT_EQ(ceil_bound(fits({2.1})), 3);
  EXPECT_EQ(ceil_bound(fits({5.0})), 5);
  EXPECT_THROW(ceil_bound(std::vector<FitResult>{}), DomainError);
}

TEST(ResultsCsv, EmitAndReload) {
  const auto dir = std::filesystem::temp_directory_path() / "shadowfalqon_test_experiments";
  std::filesystem::create_directories(dir);
  const std::string empty_path = (dir / "empty.csv").string();
  emit_results(empty_path, std::vector<Sample>{});
  {
    std::ifstream is(empty_path);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, kResultsHeader);
    EXPECT_FALSE(std::getline(is, line));
  }

  const std::string one_path = (dir / "one.csv").string();
  const std::vector<Sample> one{{"shadow", "complete:4", 4, 12, 0.1, 0, 3150.4}};
  emit_results(one_path, one);
  {
    std::ifstream is(one_path);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    EXPECT_EQ(lines, 2);
  }

  auto many = synthetic(3.3, 1.0 / 3.0, {0.05, 0.1});
  many[3].mode = "direct";
  const std::string many_path = (dir / "many.csv").string();
  emit_results(many_path, many, {{"seed", "7"}});
  EXPECT_EQ(load_results(many_path), many);

  EXPECT_THROW(emit_results((dir / "missing" / "x.csv").string(), one), IoError);
  EXPECT_THROW(load_results((dir / "nope.csv").string()), IoError);
  std::istringstream bad(std::string(kResultsHeader) + "\nshadow,a,4,12,0.1,0\n");
  EXPECT_THROW(read_results_csv(bad), ParseError);
  std::filesystem::remove_all(dir);
}

TEST(ScalingRun, SmallConfiguration) {
  ScalingRunConfig cfg;
  cfg.sizes = {4, 6};
  cfg.epsilons = {0.1, 0.2};
  cfg.runs = 3;
  cfg.reference_layers = 3;
  cfg.master_seed = 1;
  const auto samples = scaling_run(cfg);
  ASSERT_EQ(samples.size(), 2u * 2u * 3u);
  EXPECT_EQ(samples[0].num_observables, 12u);
  EXPECT_EQ(samples.back().num_observables, 30u);

  double tight = 0, loose = 0;
  for (const auto &s : samples) {
    EXPECT_EQ(s.mode, "shadow");
    EXPECT_GE(s.budget_per_layer, 128.0);
    (s.epsilon_or_err == 0.1 ? tight : loose) += s.budget_per_layer;
  }
  EXPECT_GT(tight, loose);
  EXPECT_EQ(scaling_run(cfg), samples);
}

TEST(ScalingRun, BudgetGrowsWithObservableCount) {
  ScalingRunConfig cfg;
  cfg.sizes = {4, 5, 6, 7};
  cfg.epsilons = {0.1};
  cfg.runs = 3;
  cfg.reference_layers = 4;
  cfg.master_seed = 2;
  const auto samples = scaling_run(cfg);
  std::vector<double> l, mean;
  for (std::size_t n : cfg.sizes) {
    double s = 0;
    int c = 0;
    for (const auto &x : samples) {
      if (x.n == n) {
        s += x.budget_per_layer;
        ++c;
      }
    }
    l.push_back(static_cast<double>(n * (n - 1)));
    mean.push_back(s / c);
  }
  EXPECT_GT(pearson(ranks(l), ranks(mean)), 0.0);
}

TEST(ScalingRun, Validation) {
  ScalingRunConfig cfg;
  cfg.sizes = {};
  EXPECT_THROW(scaling_run(cfg), DomainError);
  cfg = ScalingRunConfig{};
  cfg.epsilons = {0.0};
  EXPECT_THROW(scaling_run(cfg), DomainError);

  ScalingRunConfig tiny;
  tiny.sizes = {4};
  tiny.epsilons = {1e-4};
  tiny.runs = 1;
  tiny.reference_layers = 1;
  tiny.max_budget = 1024;
  EXPECT_THROW(scaling_run(tiny), ExhaustionError);
}
