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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "stochpack/adapters.hpp"
#include "stochpack/generators.hpp"
#include "stochpack/strategies.hpp"
#include "stochpack/witness.hpp"

namespace stochpack {
namespace {

using Members = std::vector<std::vector<int64_t>>;

Members sorted(Members m) {
  std::sort(m.begin(), m.end());
  return m;
}

TEST(TdiCover, TwoRowsCapOneAndAHalf) {
  auto cover = enumerate_tdi_cover({1, 1}, 2, Rational(1, 4));
  EXPECT_EQ(cover.cap, Rational(3, 2));
  EXPECT_EQ(sorted(cover.members), (Members{{0, 0}, {0, 1}, {1, 0}}));
  EXPECT_EQ(cover.denominator, 1);
  EXPECT_EQ(cover.scaled, cover.members);
}

TEST(TdiCover, EpsilonOneLeavesZero) {
  auto cover = enumerate_tdi_cover({2, 1, 3}, 5, 1);
  EXPECT_EQ(cover.members, (Members{{0, 0, 0}}));
}

TEST(TdiCover, StarsAndBars) {
  auto cover = enumerate_tdi_cover({1, 1, 1}, 3, Rational(1, 3));
  EXPECT_EQ(cover.size(), 10u);
  std::set<std::vector<int64_t>> distinct(cover.members.begin(), cover.members.end());
  EXPECT_EQ(distinct.size(), 10u);
}

TEST(TdiCover, EveryMemberRespectsCapExactly) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int64_t> b(1 + rng.below(5));
    for (auto& v : b) v = rng.between(1, 3);
    Rational mu(rng.between(0, 8)), eps(rng.between(1, 9), 10);
    auto cover = enumerate_tdi_cover(b, mu, eps);
    // Brute-force count over the box each coordinate allows.
    int64_t budget = static_cast<int64_t>(std::floor(to_double((1 - eps) * mu) + 1e-12));
    size_t expected = 0;
    std::vector<int64_t> u(b.size(), 0);
    while (true) {
      int64_t cost = 0;
      for (size_t i = 0; i < b.size(); ++i) cost += u[i] * b[i];
      expected += cost <= budget;
      size_t i = 0;
      while (i < b.size() && ++u[i] > budget) u[i++] = 0;
      if (i == b.size()) break;
    }
    EXPECT_EQ(cover.size(), expected) << "trial " << trial;
    for (size_t k = 0; k < cover.size(); ++k) EXPECT_LE(cover.objective_of(k), cover.cap);
  }
}

TEST(TdiCover, SizeGuards) {
  EXPECT_THROW(enumerate_tdi_cover(std::vector<int64_t>(13, 1), 2, Rational(1, 2)),
               SizeLimitError);
  EXPECT_THROW(enumerate_tdi_cover({1, 1}, 9, Rational(1, 2)), SizeLimitError);
  EXPECT_THROW(enumerate_tdi_cover({1, 1}, 2, 0), std::invalid_argument);
  EXPECT_THROW(enumerate_sparse_cover(std::vector<int64_t>(11, 1), 2, Rational(1, 2), 1),
               SizeLimitError);
}

TEST(SparseCover, TinySupportBudgetGivesZero) {
  auto cover = enumerate_sparse_cover({1, 2, 1}, 3, Rational(1, 2), Rational(1, 4));
  EXPECT_EQ(cover.members, (Members{{0, 0, 0}}));
}

TEST(SparseCover, MatchesDoubleLoop) {
  auto cover = enumerate_sparse_cover({1, 1}, 2, Rational(1, 2), 1);
  EXPECT_EQ(cover.step, (std::vector<Rational>{Rational(1, 4), Rational(1, 4)}));
  EXPECT_EQ(cover.cap, Rational(3, 2));
  // Values on the 1/4 grid with y1 + y2 <= 3/2.
  size_t count = 0;
  for (Rational y1 = 0; y1 <= 2; y1 += Rational(1, 4))
    for (Rational y2 = 0; y2 <= 2; y2 += Rational(1, 4)) count += y1 + y2 <= Rational(3, 2);
  EXPECT_EQ(count, 28u);
  EXPECT_EQ(cover.size(), count);
}

TEST(SparseCover, SupportLimitBites) {
  auto cover = enumerate_sparse_cover({1, 1, 1}, 2, Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(cover.support_limit, 1u);
  for (const auto& u : cover.members)
    EXPECT_LE(std::count_if(u.begin(), u.end(), [](int64_t v) { return v != 0; }), 1);
  // Cap 3/2: zero plus each row alone with 1..3 units of 1/2.
  EXPECT_EQ(cover.size(), 1u + 3u * 3u);
}

TEST(SparseCover, RoundUpDominates) {
  std::vector<int64_t> b{1, 2, 3};
  Rational mu = 4, eps(1, 2), gamma(1, 2);
  auto cover = enumerate_sparse_cover(b, mu, eps, gamma);
  std::set<std::vector<Rational>> members;
  for (size_t k = 0; k < cover.size(); ++k) members.insert(cover.vector_of(k));
  Rng rng(19);
  Rational cap = (1 - eps) * mu;
  for (int trial = 0; trial < 100; ++trial) {
    // Random y with y.b <= (1 - eps) mu on at most two rows.
    std::vector<Rational> y(3, 0);
    size_t r1 = rng.below(3), r2 = rng.below(3);
    Rational share(static_cast<int64_t>(rng.below(1000)), 1000);
    y[r1] += share * cap / b[r1];
    y[r2] += (1 - share) * cap / b[r2] * Rational(static_cast<int64_t>(rng.below(1000)), 1000);
    auto yp = round_up_to_grid(y, cover.step);
    Rational cost = 0;
    for (size_t i = 0; i < 3; ++i) {
      EXPECT_GE(yp[i], y[i]);
      cost += yp[i] * b[i];
    }
    EXPECT_LE(cost, (1 - eps / 2) * mu) << "trial " << trial;
    EXPECT_TRUE(members.count(yp)) << "trial " << trial;
  }
}

TEST(Enumerators, AgreeOnRandomProblems) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    GridProblem g;
    g.weight.resize(1 + rng.below(5));
    for (auto& w : g.weight) w = rng.between(1, 4);
    g.budget = rng.between(0, 9);
    g.support_limit = rng.below(g.weight.size() + 1);
    EXPECT_EQ(sorted(enumerate_recursive(g)), sorted(enumerate_iterative(g))) << trial;
  }
}

Matrix<int64_t> k22_matrix() {
  return make_bipartite_instance(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}).A;
}

TEST(CoverProperty, ZeroObjectiveIsVacuous) {
  auto A = k22_matrix();
  auto cover = enumerate_tdi_cover({1, 1, 1, 1}, 2, Rational(1, 4));
  std::vector<int64_t> c(4, 0);
  auto rep = verify_cover_property(cover, A, c);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.vacuous);
  ASSERT_TRUE(rep.feasible_member.has_value());
  EXPECT_EQ(cover.members[*rep.feasible_member], (std::vector<int64_t>{0, 0, 0, 0}));
}

TEST(CoverProperty, K22AllInfeasible) {
  auto A = k22_matrix();
  auto cover = enumerate_tdi_cover({1, 1, 1, 1}, 2, Rational(1, 4));
  EXPECT_EQ(cover.size(), 5u);
  std::vector<int64_t> c(4, 1);
  auto rep = verify_cover_property(cover, A, c);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.vacuous);
  EXPECT_EQ(*rep.dual_optimum, 2);
  EXPECT_EQ(rep.threshold, Rational(3, 2));
  EXPECT_EQ(*rep.margin, Rational(1, 2));
}

TEST(CoverProperty, IncompleteCoverIsCaught) {
  // Pessimistic weight only on edge (0,0): y = e_0 is the cheap cover, and
  // it is removed from the list.
  auto A = k22_matrix();
  auto cover = enumerate_tdi_cover({1, 1, 1, 1}, 2, Rational(1, 4));
  std::vector<int64_t> c{1, 0, 0, 0};
  ASSERT_TRUE(verify_cover_property(cover, A, c).vacuous);
  WitnessCover broken = cover;
  broken.members.clear();
  broken.scaled.clear();
  broken.members.push_back({0, 0, 0, 0});
  broken.scaled.push_back({0, 0, 0, 0});
  auto rep = verify_cover_property(broken, A, c);
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(*rep.dual_optimum, 1);
  ASSERT_EQ(rep.counterexample.size(), 4u);
  EXPECT_TRUE(dual_feasible(rep.counterexample, A, c));
}

TEST(CoverProperty, RandomBipartiteNeverFails) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = generate_bipartite(3, 3, 0.6, seed);
    if (inst.m == 0) continue;
    Rng rng(seed);
    std::vector<int64_t> c(inst.m);
    for (auto& v : c) v = rng.between(0, 2);
    auto adapter = make_adapter(inst);
    int64_t mu = adapter->omniscient_ip(c);
    if (mu > kMaxTdiMu) continue;
    auto cover = enumerate_tdi_cover(inst.b, mu, Rational(1, 4));
    EXPECT_TRUE(verify_cover_property(cover, inst.A, c).holds) << "seed " << seed;
  }
}

TEST(Tracker, CountsReappearances) {
  Matrix<int64_t> A(1, 1, 1);
  WitnessTracker tr(A, {{0}, {1}}, 1);
  std::vector<int64_t> c0{0}, c1{1}, c2{2};
  tr.observe(0, c0);
  tr.observe(1, c1);
  tr.observe(2, c2);
  EXPECT_EQ(tr.monotonicity_violations(), 0u);
  EXPECT_EQ(tr.rows()[0], (std::vector<uint8_t>{1, 1}));
  EXPECT_EQ(tr.rows()[1], (std::vector<uint8_t>{0, 1}));
  EXPECT_FALSE(tr.any_feasible_at(2));
  tr.observe(3, c0);
  EXPECT_EQ(tr.monotonicity_violations(), 2u);
  std::ostringstream os;
  tr.dump(os);
  EXPECT_EQ(os.str(), "step,y0,y1\n0,1,1\n1,0,1\n2,0,0\n3,1,1\n");
}

TEST(Tracker, ScaledMembers) {
  Matrix<int64_t> A(2, 1, 1);
  // y = (1/2, 1/2) over denominator 2.
  WitnessTracker tr(A, {{1, 1}}, 2);
  std::vector<int64_t> one{1}, two{2};
  tr.observe(0, one);
  tr.observe(1, two);
  EXPECT_TRUE(tr.any_feasible_at(0));
  EXPECT_FALSE(tr.any_feasible_at(1));
}

// One row, twelve unit items, c- = 0, c+ = 1: y = 0 stays feasible exactly
// while every reveal so far came up low.
TEST(Dynamics, SingleRowZeroWitnessSurvival) {
  Matrix<int64_t> A(1, 12, 1);
  auto inst = make_explicit_instance(A, {1});
  auto adapter = make_adapter(inst);
  auto obj = StochasticObjective::uniform(12, 0, 1, 0.5);
  SurvivalCurve curve;
  curve.mu_tilde = 1;
  curve.epsilon_prime = 0.25;
  curve.p = 0.5;
  curve.delta_c = 1;
  const int trials = 4000;
  const int64_t T = 6;
  for (int s = 0; s < trials; ++s) {
    QueryOracle oracle(inst, sample_realization(obj, derive_seed(9, 0, s, Stream::kNature)));
    StrategyConfig cfg;
    cfg.T = T;
    cfg.strategy_seed = derive_seed(9, 0, s, Stream::kStrategy);
    WitnessTracker tr(A, {{0}}, 1);
    RunOptions opts;
    opts.observer = tr.observer();
    opts.compute_omniscient_ip = false;
    run_adaptive(inst, obj, oracle, *adapter, cfg, opts);
    ASSERT_EQ(tr.rows().size(), static_cast<size_t>(T + 1));
    EXPECT_EQ(tr.monotonicity_violations(), 0u);
    curve.add(tr);
  }
  for (size_t t = 0; t <= static_cast<size_t>(T); ++t)
    EXPECT_NEAR(curve.frequency(t), std::pow(0.5, static_cast<double>(t)), 0.03) << "t " << t;
  EXPECT_NEAR(curve.bound(1), std::exp(-0.125), 1e-12);
  std::ostringstream os;
  curve.write_csv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "mu_tilde,t,survived,total,frequency,bound");
}

TEST(Dynamics, HookRunsOnceAndReturnsTracker) {
  auto inst = make_bipartite_instance(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  auto cover = enumerate_tdi_cover(inst.b, 2, Rational(1, 4));
  int calls = 0;
  auto tr = witness_dynamics(inst.A, cover, [&](PessimisticObserver obs) {
    ++calls;
    std::vector<int64_t> zero(4, 0), one(4, 1);
    obs(0, zero);
    obs(1, one);
  });
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(tr.members(), 5u);
  EXPECT_TRUE(tr.any_feasible_at(0));
  EXPECT_FALSE(tr.any_feasible_at(1));
}

TEST(Cover, PlotBound) {
  auto cover = enumerate_tdi_cover({1, 1, 1}, 3, Rational(1, 3));
  EXPECT_NEAR(cover.size_bound_for_plotting(), std::exp(9.0 * std::log(2.0)), 1e-6);
  EXPECT_LE(static_cast<double>(cover.size()), cover.size_bound_for_plotting());
}

}  // namespace
}  // namespace stochpack
