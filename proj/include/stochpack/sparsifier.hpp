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

// Color-coding vertex sparsification and the speedup wrapper built on it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochpack/adapters.hpp"
#include "stochpack/instance.hpp"
#include "stochpack/random.hpp"
#include "stochpack/strategies.hpp"

namespace stochpack {

/// beta(k, eps, delta) = 2 e^{eps/k} ln(1/delta) / eps.
inline double beta(size_t k, double epsilon, double delta) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return 2.0 * std::exp(epsilon / static_cast<double>(k)) * std::log(1.0 / delta) / epsilon;
}

struct ColoringConfig {
  size_t k = 2;
  double epsilon = 0.5;
  double delta = 0.5;
  int64_t s = 1;  // upper bound on the rank
  uint64_t seed = 1;
  std::optional<uint64_t> num_colors_override;

  /// ceil(beta k^2 s / delta), or the override.
  uint64_t num_colors() const {
    if (num_colors_override) {
      if (*num_colors_override == 0) throw std::invalid_argument("num_colors must be positive");
      return *num_colors_override;
    }
    if (s < 1) throw std::invalid_argument("s must be a positive integer");
    double kk = static_cast<double>(k);
    double raw = beta(k, epsilon, delta) * kk * kk * static_cast<double>(s) / delta;
    return std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(raw - 1e-9)));
  }
};

struct Hypergraph {
  size_t num_vertices = 0;
  size_t k = 0;
  std::vector<std::vector<int>> edges;
};

/// Hyperedges of a 0/1, unit-capacity instance: one per column, over the
/// rows in its support. All supports must have the same size.
inline Hypergraph hypergraph_of(const PackingInstance& inst) {
  Hypergraph hg;
  hg.num_vertices = inst.n;
  for (size_t i = 0; i < inst.n; ++i)
    if (inst.b[i] != 1) throw StructuralError("sparsification needs unit capacities");
  auto supports = inst.column_supports();
  for (size_t j = 0; j < inst.m; ++j) {
    std::vector<int> e;
    for (size_t i : supports[j]) {
      if (inst.A(i, j) != 1) throw StructuralError("sparsification needs a 0/1 matrix");
      e.push_back(static_cast<int>(i));
    }
    if (j == 0) hg.k = e.size();
    if (e.size() != hg.k || e.empty())
      throw StructuralError("sparsification needs a uniform hypergraph");
    hg.edges.push_back(std::move(e));
  }
  return hg;
}

struct SparsifiedInstance {
  uint64_t num_colors = 0;
  std::vector<uint64_t> color;   // vertex -> color in [0, num_colors)
  std::vector<size_t> surviving;  // original edge ids, increasing
  // Induced hypergraph over the colors that appear on surviving edges,
  // relabelled densely; item i is original edge item_of[i].
  PackingInstance induced;
  std::vector<uint64_t> used_colors;
  std::vector<size_t> item_of;

  double survival_fraction(size_t total_edges) const {
    return total_edges == 0 ? 1.0
                            : static_cast<double>(surviving.size()) / static_cast<double>(total_edges);
  }
};

/// Colors every vertex uniformly and keeps the hyperedges whose vertices
/// all received distinct colors. Requires n >= 2k.
inline SparsifiedInstance sparsify(const Hypergraph& hg, const ColoringConfig& config) {
  if (hg.num_vertices < 2 * config.k)
    throw std::invalid_argument("sparsify needs n >= 2k (n = " + std::to_string(hg.num_vertices) +
                                ", k = " + std::to_string(config.k) + ")");
  for (const auto& e : hg.edges)
    if (e.size() != config.k) throw StructuralError("hyperedge size differs from k");
  SparsifiedInstance out;
  out.num_colors = config.num_colors();
  Rng rng(config.seed);
  out.color.resize(hg.num_vertices);
  for (auto& c : out.color) c = rng.below(out.num_colors);

  std::map<uint64_t, int> dense;
  std::vector<std::vector<int>> induced_edges;
  for (size_t j = 0; j < hg.edges.size(); ++j) {
    std::vector<uint64_t> cs;
    for (int v : hg.edges[j]) cs.push_back(out.color[static_cast<size_t>(v)]);
    std::sort(cs.begin(), cs.end());
    if (std::adjacent_find(cs.begin(), cs.end()) != cs.end()) continue;
    out.surviving.push_back(j);
    std::vector<int> e;
    for (uint64_t c : cs) {
      auto [it, fresh] = dense.try_emplace(c, static_cast<int>(dense.size()));
      (void)fresh;
      e.push_back(it->second);
    }
    induced_edges.push_back(std::move(e));
    out.item_of.push_back(j);
  }
  out.used_colors.assign(dense.size(), 0);
  for (auto [c, id] : dense) out.used_colors[static_cast<size_t>(id)] = c;
  out.induced = make_hypergraph_instance(dense.size(), config.k, std::move(induced_edges));
  return out;
}

struct FallingFactorialCheck {
  double ratio = 1.0;
  double bound = 1.0;
  bool pass = true;
};

/// n(n-1)...(n-k+1) / n^k against exp(-k^2 / n).
inline FallingFactorialCheck falling_factorial_lower_bound(int64_t n, int64_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  FallingFactorialCheck out;
  double nn = static_cast<double>(n);
  for (int64_t i = 0; i < k; ++i) out.ratio *= (nn - static_cast<double>(i)) / nn;
  out.bound = std::exp(-static_cast<double>(k * k) / nn);
  out.pass = out.ratio >= out.bound;
  return out;
}

struct SpeedupConfig {
  Mode mode = Mode::kAdaptive;
  double epsilon = 0.3;
  double delta = 0.3;
  double log_constant = 1.0;  // multiplier on the log term of T
  uint64_t coloring_seed = 1;
  uint64_t strategy_seed = 1;
  std::optional<int64_t> T_override;
};

struct SpeedupResult {
  RunResult result;  // mapped back to the original items
  int64_t s = 0;
  double epsilon_prime = 0;
  double delta_prime = 0;
  double alpha = 1.0;
  int64_t T = 0;
  SparsifiedInstance sparsified;
};

/// Estimates s from the cardinality relaxation, sparsifies with
/// eps' = eps / (1 + c_max) and delta' = delta / 4, then runs the strategy
/// on the colour-class instance. Reveals made on the sparsified instance
/// are replayed on `oracle`.
inline SpeedupResult speedup_run(const PackingInstance& inst, const StochasticObjective& obj,
                                 QueryOracle& oracle, const ProblemAdapter& adapter,
                                 const SpeedupConfig& config) {
  SpeedupResult out;
  auto hg = hypergraph_of(inst);
  std::vector<int64_t> ones(inst.m, 1);
  double card = adapter.solve_relaxation(ones).value;
  out.s = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(card - 1e-9)));
  out.alpha = adapter.reference_alpha();
  out.epsilon_prime = config.epsilon / (1.0 + static_cast<double>(obj.c_max()));
  out.delta_prime = config.delta / 4.0;

  ColoringConfig cc;
  cc.k = hg.k;
  cc.epsilon = out.epsilon_prime;
  cc.delta = out.delta_prime;
  cc.s = out.s;
  cc.seed = config.coloring_seed;
  out.sparsified = sparsify(hg, cc);
  const auto& sp = out.sparsified;

  double logM = config.log_constant *
                std::log(static_cast<double>(hg.k) /
                         (obj.p() * out.alpha * out.epsilon_prime * out.delta_prime));
  out.T = config.T_override ? *config.T_override
                            : iteration_bound(static_cast<double>(obj.delta_c()),
                                              out.epsilon_prime, obj.p(), std::max(0.0, logM),
                                              out.delta_prime);

  // Restriction of the objective and of nature's draw to surviving items.
  const auto& real = oracle.hidden_realization();
  std::vector<int64_t> lo, hi;
  Realization sub_real;
  sub_real.seed = real.seed;
  for (size_t j : sp.item_of) {
    lo.push_back(obj.c_minus()[j]);
    hi.push_back(obj.c_plus()[j]);
    sub_real.c.push_back(real.c[j]);
  }
  StochasticObjective sub_obj(lo, hi, obj.p());
  QueryOracle sub_oracle(sp.induced, sub_real);
  for (size_t i = 0; i < sp.item_of.size(); ++i)
    if (oracle.is_revealed(sp.item_of[i])) sub_oracle.query(i);
  HypergraphAdapter sub_adapter(sp.induced);

  StrategyConfig sc;
  sc.mode = config.mode;
  sc.T = out.T;
  sc.epsilon = out.epsilon_prime;
  sc.epsilon_prime = out.epsilon_prime;
  sc.delta = out.delta_prime;
  sc.strategy_seed = config.strategy_seed;
  RunOptions sub_opts;
  sub_opts.compute_omniscient_ip = false;
  auto sub = run_strategy(sp.induced, sub_obj, sub_oracle, sub_adapter, sc, sub_opts);

  for (size_t i = 0; i < sp.item_of.size(); ++i)
    if (sub_oracle.is_revealed(i)) oracle.query(sp.item_of[i]);

  RunResult& res = out.result;
  res.trace = std::move(sub.trace);
  res.pessimistic_lp = sub.pessimistic_lp;
  res.x.assign(inst.m, 0);
  for (size_t i = 0; i < sp.item_of.size(); ++i)
    if (sub.x[i]) res.x[sp.item_of[i]] = 1;
  for (size_t j = 0; j < inst.m; ++j)
    if (res.x[j]) res.value += real.c[j];
  res.omniscient_lp = adapter.solve_relaxation(real.c).value;
  res.omniscient_ip = adapter.omniscient_ip(real.c);
  res.ratio_lp = res.omniscient_lp > 0 ? static_cast<double>(res.value) / res.omniscient_lp : 1.0;
  res.ratio_ip = *res.omniscient_ip > 0
                     ? static_cast<double>(res.value) / static_cast<double>(*res.omniscient_ip)
                     : 1.0;
  res.queries_total = oracle.total_queries();
  res.row_queries.assign(oracle.row_queries().begin(), oracle.row_queries().end());
  return out;
}

}  // namespace stochpack
