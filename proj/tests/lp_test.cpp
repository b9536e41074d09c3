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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stochpack/generators.hpp"
#include "stochpack/lp.hpp"

namespace stochpack {
namespace {

Matrix<int64_t> dense(const std::vector<std::vector<int64_t>>& rows) {
  Matrix<int64_t> A(rows.size(), rows[0].size(), 0);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) A(i, j) = rows[i][j];
  return A;
}

std::vector<int64_t> random_weights(size_t m, int64_t hi, Rng& rng) {
  std::vector<int64_t> w(m);
  for (auto& v : w) v = rng.between(0, hi);
  return w;
}

LpProblem triangle(bool rational_weights = false) {
  auto inst = make_graph_instance(3, {{0, 1}, {1, 2}, {0, 2}});
  std::vector<int64_t> ones(3, 1);
  (void)rational_weights;
  return LpProblem::make(inst.A, inst.b, ones);
}

LpProblem k22() {
  auto inst = make_bipartite_instance(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  std::vector<int64_t> ones(4, 1);
  return LpProblem::make(inst.A, inst.b, ones);
}

TEST(Primal, SingleRow) {
  std::vector<int64_t> w{1, 1};
  auto lp = LpProblem::make(dense({{1, 1}}), {1}, w);
  auto sol = solve_primal<Rational>(lp);
  EXPECT_EQ(sol.value, 1);
  EXPECT_TRUE(sol.is_vertex);
  EXPECT_TRUE((sol.x[0] == 1 && sol.x[1] == 0) || (sol.x[0] == 0 && sol.x[1] == 1));
}

TEST(Primal, K22IsIntegral) {
  auto sol = solve_primal<Rational>(k22());
  EXPECT_EQ(sol.value, 2);
  for (const auto& v : sol.x) EXPECT_TRUE(v == 0 || v == 1);
  EXPECT_EQ(oracle::matching_by_subsets(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {1, 1, 1, 1}), 2);
}

TEST(Primal, TriangleIsHalfIntegral) {
  auto sol = solve_primal<Rational>(triangle());
  EXPECT_EQ(sol.value, Rational(3, 2));
  for (const auto& v : sol.x) EXPECT_EQ(v, Rational(1, 2));
  auto inst = make_graph_instance(3, {{0, 1}, {1, 2}, {0, 2}});
  auto ref = oracle::lp_by_vertex_enumeration(inst.A, inst.b, {1, 1, 1});
  EXPECT_EQ(ref.value, Rational(3, 2));
  ASSERT_EQ(ref.optimal_vertices.size(), 1u);
  EXPECT_EQ(ref.optimal_vertices[0], sol.x);
}

TEST(Primal, FloatMatchesRational) {
  auto s = solve_primal<double>(triangle());
  EXPECT_NEAR(s.value, 1.5, 1e-12);
  EXPECT_DOUBLE_EQ(solve_value(triangle(), Arithmetic::kRational), 1.5);
  EXPECT_NEAR(solve_value(triangle(), Arithmetic::kFloat), 1.5, 1e-12);
}

TEST(Primal, AgreesWithVertexEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    size_t n = 1 + rng.below(4), m = 1 + rng.below(5);
    auto inst = generate_generic(n, m, 0.6, 3, 1000 + static_cast<uint64_t>(trial));
    auto w = random_weights(m, 6, rng);
    auto lp = LpProblem::make(inst.A, inst.b, w);
    auto sol = solve_primal<Rational>(lp);
    auto ref = oracle::lp_by_vertex_enumeration(inst.A, inst.b, w);
    EXPECT_EQ(sol.value, ref.value) << "trial " << trial;
    bool is_listed = std::find(ref.optimal_vertices.begin(), ref.optimal_vertices.end(), sol.x) !=
                     ref.optimal_vertices.end();
    EXPECT_TRUE(is_listed) << "trial " << trial << ": returned x is not an optimal vertex";
  }
}

TEST(Primal, ExplicitBoundsCapVariables) {
  // Without the unit bound x1 could reach 2.
  std::vector<int64_t> w{1, 1};
  auto lp = LpProblem::make(dense({{1, 1}}), {2}, w, true);
  auto sol = solve_primal<Rational>(lp);
  EXPECT_EQ(sol.value, 2);
  EXPECT_EQ(sol.x[0], 1);
  EXPECT_EQ(sol.x[1], 1);
  auto dual = solve_dual<Rational>(lp);
  EXPECT_TRUE(check_duality(lp, sol, dual).ok);
}

TEST(Primal, Deterministic) {
  Rng rng(3);
  auto inst = generate_generic(8, 10, 0.5, 4, 77);
  auto w = random_weights(10, 9, rng);
  auto lp = LpProblem::make(inst.A, inst.b, w);
  auto a = solve_primal<double>(lp), b = solve_primal<double>(lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.value, b.value);
}

TEST(Primal, PerturbationKeepsOptimalValue) {
  auto lp = k22();
  for (uint64_t seed = 1; seed < 6; ++seed) {
    SolveOptions opt;
    opt.perturbation_seed = seed;
    auto sol = solve_primal<double>(lp, opt);
    EXPECT_NEAR(sol.value, 2.0, 1e-9);
  }
}

TEST(Primal, RejectsNegativeData) {
  std::vector<int64_t> w{-1};
  EXPECT_THROW(LpProblem::make(dense({{1}}), {1}, w), StructuralError);
  std::vector<int64_t> ok{1};
  EXPECT_THROW(LpProblem::make(dense({{1}}), {1, 1}, ok), StructuralError);
}

TEST(Dual, SingleConstraint) {
  std::vector<int64_t> w{3};
  auto lp = LpProblem::make(dense({{1}}), {1}, w);
  auto dual = solve_dual<Rational>(lp);
  ASSERT_EQ(dual.y.size(), 1u);
  EXPECT_EQ(dual.y[0], 3);
  EXPECT_EQ(dual.value, 3);
  auto explicit_dual = solve_dual_explicit<Rational>(lp);
  EXPECT_EQ(explicit_dual.value, 3);
}

TEST(Dual, K22IsIntegralCover) {
  auto lp = k22();
  auto dual = solve_dual<Rational>(lp);
  EXPECT_EQ(dual.value, 2);
  for (const auto& y : dual.y) EXPECT_TRUE(y == 0 || y == 1);
  EXPECT_EQ(oracle::min_vertex_cover(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}), 2u);
}

TEST(Dual, TriangleValue) {
  auto lp = triangle();
  EXPECT_EQ(solve_dual<Rational>(lp).value, Rational(3, 2));
  EXPECT_EQ(solve_dual_explicit<Rational>(lp).value, Rational(3, 2));
}

TEST(Duality, SolvedPairPasses) {
  for (const auto& lp : {triangle(), k22()}) {
    auto pd = solve_lp<Rational>(lp);
    auto rep = check_duality(lp, pd.primal, pd.dual);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.gap, 0.0);
    auto pf = solve_lp<double>(lp);
    EXPECT_TRUE(check_duality(lp, pf.primal, pf.dual).ok);
  }
}

TEST(Duality, ScaledDualFailsFeasibility) {
  auto lp = k22();
  auto pd = solve_lp<Rational>(lp);
  auto bad = pd.dual;
  for (auto& y : bad.y) y *= Rational(9, 10);
  bad.value *= Rational(9, 10);
  auto rep = check_duality(lp, pd.primal, bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_GT(rep.dual_violation, 0.0);
  EXPECT_TRUE(rep.worst_dual_column.has_value());
}

TEST(Duality, RationalGapIsZeroOnRandomSquare) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto inst = generate_generic(10, 10, 0.4, 4, 500 + seed);
    Rng rng(seed);
    auto w = random_weights(10, 9, rng);
    auto lp = LpProblem::make(inst.A, inst.b, w);
    auto pd = solve_lp<Rational>(lp);
    auto rep = check_duality(lp, pd.primal, pd.dual);
    EXPECT_TRUE(rep.ok) << "seed " << seed;
    EXPECT_EQ(pd.primal.value, pd.dual.value);
    EXPECT_EQ(solve_dual_explicit<Rational>(lp).value, pd.primal.value);
  }
}

TEST(Duality, FloatGapWithinTolerance) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto inst = generate_generic(12, 15, 0.3, 5, 900 + seed);
    Rng rng(seed + 7);
    auto w = random_weights(15, 20, rng);
    auto lp = LpProblem::make(inst.A, inst.b, w);
    auto pd = solve_lp<double>(lp);
    auto rep = check_duality(lp, pd.primal, pd.dual);
    EXPECT_TRUE(rep.ok) << "seed " << seed;
    EXPECT_LE(std::abs(pd.primal.value - pd.dual.value), kGapTol);
    EXPECT_NEAR(solve_dual_explicit<double>(lp).value, pd.primal.value, kGapTol);
  }
}

TEST(Dump, WritesTableau) {
  BoundedSimplex<Rational> s(triangle(), {});
  s.solve();
  std::ostringstream os;
  s.dump(os);
  EXPECT_FALSE(os.str().empty());
}

}  // namespace
}  // namespace stochpack
