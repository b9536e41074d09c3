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

// Exact integral solvers used for LP-relative rounding and omniscient
// baselines at desk scale.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochpack/common.hpp"
#include "stochpack/lp.hpp"

namespace stochpack {

struct IntegralSolution {
  std::vector<uint8_t> x;
  int64_t value = 0;
};

inline constexpr size_t kMaxBruteForceItems = 24;
inline constexpr size_t kMaxMatchingDpVertices = 20;

/// Maximum-weight matching in a bipartite graph by the Hungarian method
/// with potentials, O(N^3) for N = max(left, right). `edges[e]` is
/// (left vertex, right vertex) in side-local indices; non-positive weights
/// are never selected and parallel edges keep the heaviest (lowest id on
/// ties).
inline IntegralSolution max_weight_bipartite_matching(
    size_t left, size_t right, std::span<const std::pair<int, int>> edges,
    std::span<const int64_t> weights) {
  IntegralSolution out;
  out.x.assign(edges.size(), 0);
  const size_t n = std::max(left, right);
  if (n == 0 || edges.empty()) return out;
  std::vector<int64_t> profit(n * n, 0);
  std::vector<int> best_edge(n * n, -1);
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    size_t cell = static_cast<size_t>(u) * n + static_cast<size_t>(v);
    if (weights[e] > 0 && weights[e] > profit[cell]) {
      profit[cell] = weights[e];
      best_edge[cell] = static_cast<int>(e);
    }
  }
  // Min-cost assignment on cost = -profit, 1-indexed as in the classic
  // formulation.
  const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> pu(n + 1, 0), pv(n + 1, 0), minv(n + 1);
  std::vector<size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<uint8_t> used(n + 1);
  for (size_t i = 1; i <= n; ++i) {
    match[0] = i;
    size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      size_t i0 = match[j0], j1 = 0;
      int64_t delta = inf;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        int64_t cur = -profit[(i0 - 1) * n + (j - 1)] - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          pu[match[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (size_t j = 1; j <= n; ++j) {
    size_t i = match[j];
    if (i == 0) continue;
    size_t cell = (i - 1) * n + (j - 1);
    if (best_edge[cell] >= 0 && profit[cell] > 0) {
      out.x[static_cast<size_t>(best_edge[cell])] = 1;
      out.value += profit[cell];
    }
  }
  return out;
}

/// Maximum-weight matching in a general graph by dynamic programming over
/// vertex subsets: O(2^n * deg). Refuses more than kMaxMatchingDpVertices.
inline IntegralSolution max_weight_matching_dp(size_t num_vertices,
                                               std::span<const std::pair<int, int>> edges,
                                               std::span<const int64_t> weights,
                                               size_t max_vertices = kMaxMatchingDpVertices) {
  if (num_vertices > max_vertices)
    throw SizeLimitError("matching DP refuses " + std::to_string(num_vertices) +
                         " vertices (limit " + std::to_string(max_vertices) + ")");
  IntegralSolution out;
  out.x.assign(edges.size(), 0);
  std::vector<std::vector<std::pair<int, size_t>>> adj(num_vertices);
  for (size_t e = 0; e < edges.size(); ++e) {
    if (weights[e] <= 0) continue;
    auto [u, v] = edges[e];
    adj[static_cast<size_t>(u)].push_back({v, e});
    adj[static_cast<size_t>(v)].push_back({u, e});
  }
  const uint32_t full = num_vertices == 0 ? 0u : (1u << num_vertices) - 1u;
  // best[mask]: optimum using only vertices in mask.
  std::vector<int64_t> best(static_cast<size_t>(full) + 1, 0);
  for (uint32_t mask = 1; mask <= full && full > 0; ++mask) {
    int v = std::countr_zero(mask);
    uint32_t rest = mask & ~(1u << v);
    int64_t val = best[rest];
    for (auto [u, e] : adj[static_cast<size_t>(v)])
      if (rest >> u & 1u) val = std::max(val, weights[e] + best[rest & ~(1u << u)]);
    best[mask] = val;
  }
  // Reconstruct.
  uint32_t mask = full;
  while (mask) {
    int v = std::countr_zero(mask);
    uint32_t rest = mask & ~(1u << v);
    if (best[mask] == best[rest]) {
      mask = rest;
      continue;
    }
    for (auto [u, e] : adj[static_cast<size_t>(v)]) {
      if ((rest >> u & 1u) && weights[e] + best[rest & ~(1u << u)] == best[mask]) {
        out.x[e] = 1;
        mask = rest & ~(1u << u);
        break;
      }
    }
  }
  out.value = best[full];
  return out;
}

/// Exhaustive search over 0/1 vectors with load and bound pruning. Items
/// with non-positive weight never enter. Refuses more than `max_items`
/// positive-weight items before doing any work.
inline IntegralSolution brute_force_packing(const Matrix<int64_t>& A, std::span<const int64_t> b,
                                            std::span<const int64_t> weights,
                                            size_t max_items = kMaxBruteForceItems) {
  const size_t n = A.rows(), m = A.cols();
  std::vector<size_t> items;
  for (size_t j = 0; j < m; ++j)
    if (weights[j] > 0) items.push_back(j);
  if (items.size() > max_items)
    throw SizeLimitError("brute force refuses " + std::to_string(items.size()) +
                         " items (limit " + std::to_string(max_items) + ")");
  std::vector<int64_t> suffix(items.size() + 1, 0);
  for (size_t k = items.size(); k-- > 0;) suffix[k] = suffix[k + 1] + weights[items[k]];
  std::vector<std::vector<std::pair<size_t, int64_t>>> cols(m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      if (A(i, j) != 0) cols[j].push_back({i, A(i, j)});

  std::vector<int64_t> load(n, 0);
  std::vector<uint8_t> cur(m, 0);
  IntegralSolution best;
  best.x.assign(m, 0);
  int64_t cur_value = 0;
  std::function<void(size_t)> dfs = [&](size_t k) {
    if (cur_value > best.value) {
      best.value = cur_value;
      best.x = cur;
    }
    if (k == items.size() || cur_value + suffix[k] <= best.value) return;
    size_t j = items[k];
    bool fits = true;
    for (auto [i, a] : cols[j]) fits &= load[i] + a <= b[i];
    if (fits) {
      for (auto [i, a] : cols[j]) load[i] += a;
      cur[j] = 1;
      cur_value += weights[j];
      dfs(k + 1);
      cur_value -= weights[j];
      cur[j] = 0;
      for (auto [i, a] : cols[j]) load[i] -= a;
    }
    dfs(k + 1);
  };
  dfs(0);
  return best;
}

/// LP-based branch and bound for packing IPs with integral weights. Node
/// bounds use floor(LP value) since every integral objective value is an
/// integer. Throws SizeLimitError when the node budget runs out.
inline IntegralSolution branch_and_bound_packing(const Matrix<int64_t>& A,
                                                 std::span<const int64_t> b,
                                                 std::span<const int64_t> weights,
                                                 size_t node_limit = 200000) {
  const size_t n = A.rows(), m = A.cols();
  IntegralSolution best;
  best.x.assign(m, 0);
  std::vector<int8_t> fixed(m, -1);
  for (size_t j = 0; j < m; ++j)
    if (weights[j] <= 0) fixed[j] = 0;
  size_t nodes = 0;

  std::function<void(std::vector<int64_t>, int64_t)> node = [&](std::vector<int64_t> rhs,
                                                                int64_t fixed_value) {
    if (++nodes > node_limit) throw SizeLimitError("branch and bound node limit reached");
    std::vector<size_t> free_items;
    for (size_t j = 0; j < m; ++j)
      if (fixed[j] < 0) free_items.push_back(j);
    Matrix<int64_t> sub(n, free_items.size(), 0);
    std::vector<int64_t> w(free_items.size());
    for (size_t k = 0; k < free_items.size(); ++k) {
      w[k] = weights[free_items[k]];
      for (size_t i = 0; i < n; ++i) sub(i, k) = A(i, free_items[k]);
    }
    auto lp = LpProblem::make(std::move(sub), rhs, w, /*explicit_unit_bounds=*/true);
    auto sol = solve_primal<double>(lp);
    auto bound = fixed_value + static_cast<int64_t>(std::floor(sol.value + 1e-6));
    if (bound <= best.value) return;
    // Branch on the most fractional variable, lowest index on ties.
    int branch = -1;
    double best_frac = 1e-6;
    for (size_t k = 0; k < free_items.size(); ++k) {
      double f = std::min(sol.x[k], 1.0 - sol.x[k]);
      if (f > best_frac + 1e-12) {
        best_frac = f;
        branch = static_cast<int>(k);
      }
    }
    if (branch < 0) {
      std::vector<uint8_t> x(m, 0);
      int64_t value = fixed_value;
      for (size_t j = 0; j < m; ++j) x[j] = fixed[j] == 1;
      for (size_t k = 0; k < free_items.size(); ++k)
        if (sol.x[k] > 0.5) {
          x[free_items[k]] = 1;
          value += weights[free_items[k]];
        }
      // Integral LP optimum; confirm feasibility exactly.
      for (size_t i = 0; i < n; ++i) {
        int64_t lhs = 0;
        for (size_t j = 0; j < m; ++j) lhs += A(i, j) * x[j];
        if (lhs > b[i]) throw SolverError("branch and bound produced an infeasible point");
      }
      if (value > best.value) {
        best.value = value;
        best.x = std::move(x);
      }
      return;
    }
    size_t j = free_items[static_cast<size_t>(branch)];
    std::vector<int64_t> rhs_one = rhs;
    bool fits = true;
    for (size_t i = 0; i < n; ++i) {
      rhs_one[i] -= A(i, j);
      fits &= rhs_one[i] >= 0;
    }
    if (fits) {
      fixed[j] = 1;
      node(rhs_one, fixed_value + weights[j]);
    }
    fixed[j] = 0;
    node(rhs, fixed_value);
    fixed[j] = -1;
  };
  node(std::vector<int64_t>(b.begin(), b.end()), 0);
  return best;
}

}  // namespace stochpack
