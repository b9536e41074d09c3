// Copyright 2026 The stochpack Authors
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

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "stochpack/adapters.hpp"
#include "stochpack/generators.hpp"
#include "stochpack/strategies.hpp"

namespace stochpack {
namespace {

StrategyConfig config(Mode mode, int64_t T, uint64_t seed = 1) {
  StrategyConfig c;
  c.mode = mode;
  c.T = T;
  c.epsilon = 0.2;
  c.epsilon_prime = 0.2;
  c.delta = 0.2;
  c.strategy_seed = seed;
  return c;
}

TEST(IterationBound, WorkedExample) {
  EXPECT_EQ(iteration_bound(1, 0.2, 0.5, 1, 0.2), 27);
}

TEST(IterationBound, ClampsToOne) {
  EXPECT_EQ(iteration_bound(1, 0.2, 0.5, 0.0, 0.999999), 1);
  EXPECT_EQ(iteration_bound(0, 0.2, 0.5, 3.0, 0.2), 1);
}

TEST(IterationBound, LinearInDeltaC) {
  for (double logM : {0.5, 1.0, 2.7}) {
    double raw = 1.0 / (0.3 * 0.4) * (logM + std::log(1.0 / 0.1));
    int64_t t1 = iteration_bound(1, 0.3, 0.4, logM, 0.1);
    int64_t t2 = iteration_bound(2, 0.3, 0.4, logM, 0.1);
    EXPECT_EQ(t1, static_cast<int64_t>(std::ceil(raw - 1e-9)));
    EXPECT_EQ(t2, static_cast<int64_t>(std::ceil(2 * raw - 1e-9)));
  }
}

TEST(IterationBound, RejectsBadInput) {
  EXPECT_THROW(iteration_bound(1, 0.2, 0.5, -1, 0.2), std::invalid_argument);
  EXPECT_THROW(iteration_bound(1, 0.0, 0.5, 1, 0.2), std::invalid_argument);
  EXPECT_THROW(iteration_bound(1, 0.2, 1.5, 1, 0.2), std::invalid_argument);
  EXPECT_THROW(iteration_bound(1, 0.2, 0.5, 1, 1.0), std::invalid_argument);
}

TEST(IterationBound, RecommendedScalesByW) {
  Matrix<int64_t> A(2, 3, 0);
  A(0, 0) = 1;
  A(0, 1) = 1;
  A(1, 2) = 1;
  A(1, 1) = 1;
  auto inst = make_kcspip_instance(A, {3, 3}, 2);
  auto adapter = make_adapter(inst);
  ASSERT_DOUBLE_EQ(adapter->scale_w(), 3.0);
  auto obj = StochasticObjective::uniform(3, 0, 1, 0.5);
  int64_t base = iteration_bound(1, 0.2, 0.5, default_logM(inst, 0.2), 0.2);
  EXPECT_EQ(recommended_T(inst, *adapter, obj, 0.2, 0.2, 0.2), 3 * base);
}

TEST(Config, RejectsBadParameters) {
  auto c = config(Mode::kAdaptive, 0);
  EXPECT_THROW(c.check(), std::invalid_argument);
  c.T = 1;
  c.epsilon_prime = 0.3;
  EXPECT_THROW(c.check(), std::invalid_argument);
  EXPECT_EQ(mode_from_string("nonadaptive"), Mode::kNonadaptive);
  EXPECT_THROW(mode_from_string("greedy"), std::invalid_argument);
}

TEST(Adaptive, NoUncertaintyGivesIpOptimum) {
  auto inst = generate_bipartite(4, 4, 0.6, 8);
  auto adapter = make_adapter(inst);
  std::vector<int64_t> c(inst.m);
  for (size_t j = 0; j < inst.m; ++j) c[j] = static_cast<int64_t>(j % 4);
  StochasticObjective obj(c, c, 0.5);
  QueryOracle oracle(inst, sample_realization(obj, 1));
  auto res = run_adaptive(inst, obj, oracle, *adapter, config(Mode::kAdaptive, 3));
  ASSERT_TRUE(res.omniscient_ip.has_value());
  EXPECT_EQ(res.value, *res.omniscient_ip);
  EXPECT_NEAR(res.trace.iterations[0].pessimistic_value, res.omniscient_lp, 1e-9);
}

TEST(Adaptive, CertainHighValuesAreExactAfterOneRound) {
  auto inst = generate_bipartite(3, 3, 1.0, 1);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 1, 1.0);
  int64_t T = recommended_T(inst, *adapter, obj, 0.2, 0.2, 0.2);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    QueryOracle oracle(inst, sample_realization(obj, seed));
    auto res = run_adaptive(inst, obj, oracle, *adapter, config(Mode::kAdaptive, T, seed));
    EXPECT_NEAR(res.ratio_lp, 1.0, 1e-9) << "seed " << seed;
  }
}

TEST(Adaptive, TraceInvariants) {
  auto inst = generate_bipartite(5, 5, 0.5, 4);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 2, 0.5);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    QueryOracle oracle(inst, sample_realization(obj, 100 + seed));
    auto res = run_adaptive(inst, obj, oracle, *adapter, config(Mode::kAdaptive, 12, seed));
    const auto& it = res.trace.iterations;
    ASSERT_EQ(it.size(), 12u);
    for (size_t t = 0; t < it.size(); ++t) {
      EXPECT_EQ(it[t].t, static_cast<int64_t>(t + 1));
      EXPECT_LE(it[t].pessimistic_value, res.omniscient_lp + 1e-9);
      EXPECT_GE(it[t].optimistic_value, res.omniscient_lp - 1e-9);
      if (t > 0) {
        EXPECT_LE(it[t].optimistic_value, it[t - 1].optimistic_value + 1e-9);
        EXPECT_GE(it[t].pessimistic_value, it[t - 1].pessimistic_value - 1e-9);
        EXPECT_GE(it[t].cumulative, it[t - 1].cumulative);
      }
    }
    EXPECT_EQ(it.back().cumulative, res.queries_total);
    EXPECT_LE(static_cast<double>(res.value), res.omniscient_lp + 1e-9);
    EXPECT_GE(static_cast<double>(res.value), res.pessimistic_lp - 1e-9);
  }
}

TEST(Adaptive, ExpectedRevealsWithinRowBudget) {
  auto inst = generate_bipartite(6, 6, 0.5, 10);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 1, 0.5);
  const int64_t T = 5;
  const int trials = 200;
  std::vector<double> mean_row(inst.n, 0.0);
  double mean_total = 0;
  for (int s = 0; s < trials; ++s) {
    QueryOracle oracle(inst, sample_realization(obj, derive_seed(3, 0, s, Stream::kNature)));
    auto res = run_adaptive(inst, obj, oracle, *adapter,
                            config(Mode::kAdaptive, T, derive_seed(3, 0, s, Stream::kStrategy)));
    for (size_t i = 0; i < inst.n; ++i) mean_row[i] += static_cast<double>(res.row_queries[i]);
    mean_total += static_cast<double>(res.queries_total);
  }
  int64_t sum_b = 0;
  for (size_t i = 0; i < inst.n; ++i) {
    EXPECT_LE(mean_row[i] / trials, static_cast<double>(T * inst.b[i]) + 1e-9);
    sum_b += inst.b[i];
  }
  EXPECT_LE(mean_total / trials, static_cast<double>(T * sum_b));
}

TEST(Adaptive, DerandomizedIntegralRunIgnoresCoins) {
  auto inst = generate_bipartite(4, 5, 0.6, 2);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 3, 0.4);
  auto real = sample_realization(obj, 77);
  std::vector<RunResult> runs;
  for (uint64_t seed : {1u, 2u, 99u}) {
    QueryOracle oracle(inst, real);
    auto c = config(Mode::kAdaptive, 6, seed);
    c.derandomize_integral = true;
    runs.push_back(run_adaptive(inst, obj, oracle, *adapter, c));
  }
  for (const auto& r : runs) {
    EXPECT_EQ(r.x, runs[0].x);
    EXPECT_EQ(r.queries_total, runs[0].queries_total);
  }
}

TEST(Adaptive, SameSeedsSameRun) {
  auto inst = generate_graph(7, 0.5, 3);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 1, 4, 0.3);
  auto real = sample_realization(obj, 5);
  QueryOracle o1(inst, real), o2(inst, real);
  auto a = run_adaptive(inst, obj, o1, *adapter, config(Mode::kAdaptive, 8, 4));
  auto b = run_adaptive(inst, obj, o2, *adapter, config(Mode::kAdaptive, 8, 4));
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.row_queries, b.row_queries);
  EXPECT_EQ(a.trace.iterations.size(), b.trace.iterations.size());
}

TEST(NonAdaptive, NoUncertaintyMatchesAdaptive) {
  auto inst = generate_bipartite(4, 4, 0.6, 5);
  auto adapter = make_adapter(inst);
  std::vector<int64_t> c(inst.m);
  for (size_t j = 0; j < inst.m; ++j) c[j] = static_cast<int64_t>((3 * j) % 5);
  StochasticObjective obj(c, c, 0.5);
  auto real = sample_realization(obj, 1);
  QueryOracle o1(inst, real), o2(inst, real);
  auto a = run_adaptive(inst, obj, o1, *adapter, config(Mode::kAdaptive, 4));
  auto n = run_nonadaptive(inst, obj, o2, *adapter, config(Mode::kNonadaptive, 4));
  EXPECT_EQ(a.x, n.x);
  EXPECT_EQ(a.value, n.value);
}

TEST(NonAdaptive, SingleItemForcedPath) {
  Matrix<int64_t> A(1, 1, 1);
  auto inst = make_explicit_instance(A, {1});
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(1, 0, 1, 0.5);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto real = sample_realization(obj, seed);
    QueryOracle oracle(inst, real);
    auto res = run_nonadaptive(inst, obj, oracle, *adapter, config(Mode::kNonadaptive, 1));
    ASSERT_EQ(res.trace.iterations[0].items, (std::vector<size_t>{0}));
    EXPECT_TRUE(oracle.is_revealed(0));
    EXPECT_EQ(pessimistic_vector(oracle, obj), real.c);
  }
}

TEST(NonAdaptive, RevealsExactlyTheSupposedUnion) {
  auto inst = generate_bipartite(5, 5, 0.5, 6);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 2, 0.5);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    QueryOracle oracle(inst, sample_realization(obj, seed));
    auto res = run_nonadaptive(inst, obj, oracle, *adapter, config(Mode::kNonadaptive, 10, seed));
    std::set<size_t> supposed;
    for (const auto& it : res.trace.iterations) supposed.insert(it.items.begin(), it.items.end());
    for (size_t j = 0; j < inst.m; ++j) EXPECT_EQ(oracle.is_revealed(j), supposed.count(j) > 0);
    EXPECT_EQ(res.queries_total, supposed.size());
    EXPECT_EQ(res.trace.iterations.back().cumulative, supposed.size());
    ASSERT_TRUE(res.trace.mu_prime.has_value());
    EXPECT_DOUBLE_EQ(*res.trace.mu_prime, res.trace.iterations.back().optimistic_value);
    for (size_t t = 1; t < res.trace.iterations.size(); ++t) {
      EXPECT_LE(res.trace.iterations[t].optimistic_value,
                res.trace.iterations[t - 1].optimistic_value + 1e-9);
      EXPECT_GE(res.trace.iterations[t].pessimistic_value,
                res.trace.iterations[t - 1].pessimistic_value - 1e-9);
    }
  }
}

TEST(Baselines, BlindWithZeroLowerBound) {
  auto inst = generate_bipartite(3, 3, 0.8, 1);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 5, 0.5);
  QueryOracle oracle(inst, sample_realization(obj, 2));
  auto res = run_baseline(inst, obj, oracle, *adapter, BaselineKind::kBlind);
  EXPECT_EQ(res.value, 0);
  EXPECT_EQ(res.queries_total, 0u);
}

TEST(Baselines, OmniscientOnK22) {
  auto inst = generate_bipartite(2, 2, 1.0, 1);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 1, 1, 0.5);
  QueryOracle oracle(inst, sample_realization(obj, 2));
  auto res = run_baseline(inst, obj, oracle, *adapter, BaselineKind::kOmniscient);
  EXPECT_EQ(res.value, 2);
  EXPECT_EQ(res.queries_total, inst.m);
}

TEST(Baselines, OmniscientDominatesAdaptive) {
  auto inst = generate_bipartite(5, 5, 0.5, 12);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 3, 0.5);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    auto real = sample_realization(obj, seed);
    QueryOracle o1(inst, real), o2(inst, real), o3(inst, real);
    auto omni = run_baseline(inst, obj, o1, *adapter, BaselineKind::kOmniscient);
    auto ad = run_adaptive(inst, obj, o2, *adapter, config(Mode::kAdaptive, 5, seed));
    auto rnd = run_baseline(inst, obj, o3, *adapter, BaselineKind::kUniformRandom, 4.0, seed);
    EXPECT_GE(omni.value, ad.value);
    EXPECT_GE(omni.value, rnd.value);
  }
}

TEST(Baselines, UniformRandomBudgetInExpectation) {
  auto inst = generate_bipartite(6, 6, 0.6, 3);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 1, 0.5);
  double total = 0;
  const int trials = 400;
  for (int s = 0; s < trials; ++s) {
    QueryOracle oracle(inst, sample_realization(obj, s));
    RunOptions opts;
    opts.compute_omniscient_ip = false;
    total += static_cast<double>(
        run_baseline(inst, obj, oracle, *adapter, BaselineKind::kUniformRandom, 6.0, 1000 + s, opts)
            .queries_total);
  }
  EXPECT_NEAR(total / trials, 6.0, 0.5);
}

class FlakyAdapter : public ProblemAdapter {
 public:
  explicit FlakyAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)), inner_(inst_) {}
  std::string name() const override { return "flaky"; }
  LpSolution<double> solve_relaxation(std::span<const int64_t> w) const override {
    if (++calls_ == 4) throw std::runtime_error("boom");
    return inner_.solve_relaxation(w);
  }
  IntegralSolution round_integral(std::span<const int64_t> w) const override {
    return inner_.round_integral(w);
  }

 private:
  GenericAdapter inner_;
  mutable int calls_ = 0;
};

TEST(Errors, AdapterFailureNamesIteration) {
  auto inst = generate_bipartite(2, 2, 1.0, 1);
  FlakyAdapter adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m, 0, 1, 0.5);
  QueryOracle oracle(inst, sample_realization(obj, 1));
  try {
    run_adaptive(inst, obj, oracle, adapter, config(Mode::kAdaptive, 5));
    FAIL() << "expected a solver error";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 2"), std::string::npos) << e.what();
  }
}

TEST(Errors, MismatchedObjective) {
  auto inst = generate_bipartite(2, 2, 1.0, 1);
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(inst.m + 1, 0, 1, 0.5);
  QueryOracle oracle(inst, sample_realization(StochasticObjective::uniform(inst.m, 0, 1, 0.5), 1));
  EXPECT_THROW(run_adaptive(inst, obj, oracle, *adapter, config(Mode::kAdaptive, 1)),
               StructuralError);
}

TEST(Success, ThresholdPerMode) {
  RunResult r;
  r.omniscient_lp = 10;
  r.value = 8;
  EXPECT_TRUE(is_success(Mode::kAdaptive, 0.2, r));
  r.value = 7;
  EXPECT_FALSE(is_success(Mode::kAdaptive, 0.2, r));
  r.value = 4;
  EXPECT_TRUE(is_success(Mode::kNonadaptive, 0.2, r));
  r.value = 3;
  EXPECT_FALSE(is_success(Mode::kNonadaptive, 0.2, r));
}

}  // namespace
}  // namespace stochpack
