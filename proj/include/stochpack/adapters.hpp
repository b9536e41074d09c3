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

// Problem-family plug-ins: each one knows how to solve its LP relaxation
// for a weight vector and how to round back to an integral solution.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochpack/common.hpp"
#include "stochpack/exact.hpp"
#include "stochpack/instance.hpp"
#include "stochpack/lp.hpp"
#include "stochpack/matroid.hpp"

namespace stochpack {

inline constexpr size_t kMaxBlossomVertices = 14;

class ProblemAdapter {
 public:
  explicit ProblemAdapter(PackingInstance inst) : inst_(std::move(inst)) {}
  virtual ~ProblemAdapter() = default;

  virtual std::string name() const = 0;
  Family family() const { return inst_.family; }
  const PackingInstance& instance() const { return inst_; }

  /// Guarantee of round_integral relative to solve_relaxation. The
  /// roundings are exact integer optima, so this is 1 wherever the
  /// relaxation is integral and the integrality gap bound elsewhere.
  virtual double alpha() const { return 1.0; }
  /// The literature guarantee for the family, kept as a parameter for the
  /// speedup wrapper.
  virtual double reference_alpha() const { return 1.0; }
  /// Query probabilities are x_j / scale_w.
  virtual double scale_w() const { return 1.0; }

  virtual LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const = 0;
  virtual IntegralSolution round_integral(std::span<const int64_t> weights) const = 0;

  /// Exact integral optimum for fully revealed weights.
  virtual int64_t omniscient_ip(std::span<const int64_t> weights) const {
    return round_integral(weights).value;
  }

 protected:
  void check_weights(std::span<const int64_t> weights) const {
    if (weights.size() != inst_.m)
      throw StructuralError("weight vector has length " + std::to_string(weights.size()) +
                            ", expected " + std::to_string(inst_.m));
    for (int64_t w : weights)
      if (w < 0) throw StructuralError("negative weight passed to adapter");
  }

  LpSolution<double> engine_relaxation(std::span<const int64_t> weights,
                                       bool explicit_bounds) const {
    auto lp = LpProblem::make(inst_.A, inst_.b, weights, explicit_bounds);
    return solve_primal<double>(lp);
  }

  /// 1 / L with L = max sum_j x_j over the relaxation. Any single item is
  /// feasible, so the integral optimum is at least max_j c_j >= LP / L.
  double cardinality_alpha() const {
    std::vector<int64_t> ones(inst_.m, 1);
    double card = solve_relaxation(ones).value;
    return card <= 1.0 ? 1.0 : 1.0 / card;
  }

  PackingInstance inst_;
};

/// Explicit-matrix path: lp-engine relaxation, brute-force rounding.
class GenericAdapter : public ProblemAdapter {
 public:
  explicit GenericAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)) {
    alpha_ = cardinality_alpha();
  }
  std::string name() const override { return "generic"; }
  double alpha() const override { return alpha_; }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return engine_relaxation(weights, false);
  }
  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return brute_force_packing(inst_.A, inst_.b, weights);
  }

 private:
  double alpha_ = 1.0;
};

/// Degree-constrained bipartite matching. The relaxation polytope is
/// integral, so basic optima are matchings.
class BipartiteAdapter : public ProblemAdapter {
 public:
  explicit BipartiteAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)) {
    const auto& meta = inst_.meta;
    for (const auto& e : meta.edges) {
      if (e.size() != 2) throw StructuralError("bipartite edge is not a pair");
      int u = e[0], v = e[1];
      if (static_cast<size_t>(u) >= meta.left_size || static_cast<size_t>(v) < meta.left_size)
        throw StructuralError("bipartite edge does not cross the sides");
      pairs_.push_back({u, v - static_cast<int>(meta.left_size)});
    }
  }
  std::string name() const override { return "bipartite-matching"; }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return engine_relaxation(weights, false);
  }
  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return max_weight_bipartite_matching(inst_.meta.left_size,
                                         inst_.meta.num_vertices - inst_.meta.left_size, pairs_,
                                         weights);
  }

 private:
  std::vector<std::pair<int, int>> pairs_;
};

/// General matching with degree rows plus odd-set rows
/// x(E(S)) <= (|S| - 1) / 2 for odd |S| >= 3. Odd sets are enumerated in
/// full and added lazily until none is violated.
class BlossomAdapter : public ProblemAdapter {
 public:
  explicit BlossomAdapter(PackingInstance inst, bool use_odd_sets = true)
      : ProblemAdapter(std::move(inst)), use_odd_sets_(use_odd_sets) {
    const size_t nv = inst_.meta.num_vertices;
    if (nv > kMaxBlossomVertices)
      throw SizeLimitError("blossom adapter refuses " + std::to_string(nv) +
                           " vertices (limit " + std::to_string(kMaxBlossomVertices) + ")");
    for (const auto& e : inst_.meta.edges) {
      if (e.size() != 2) throw StructuralError("graph edge is not a pair");
      pairs_.push_back({e[0], e[1]});
    }
    if (use_odd_sets_) enumerate_odd_sets();
  }
  std::string name() const override { return "nonbipartite-matching"; }
  /// Degree rows alone leave a gap of 3/2 (half-integral vertices).
  double alpha() const override { return use_odd_sets_ ? 1.0 : 2.0 / 3.0; }

  /// Odd vertex sets whose constraint is not implied by x <= 1.
  const std::vector<uint32_t>& odd_sets() const { return odd_sets_; }

  /// Degree rows followed by every odd-set row.
  PackingInstance augmented_instance() const { return with_rows(odd_sets_); }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    check_weights(weights);
    if (!use_odd_sets_) return engine_relaxation(weights, false);
    std::vector<uint32_t> active;
    std::vector<uint8_t> in_active(odd_sets_.size(), 0);
    while (true) {
      auto aug = with_rows(active);
      auto lp = LpProblem::make(aug.A, aug.b, weights);
      auto sol = solve_primal<double>(lp);
      bool added = false;
      for (size_t s = 0; s < odd_sets_.size(); ++s) {
        if (in_active[s]) continue;
        double lhs = 0.0;
        for (size_t j : edges_inside_[s]) lhs += sol.x[j];
        if (lhs > static_cast<double>(std::popcount(odd_sets_[s]) / 2) + kFeasTol) {
          active.push_back(odd_sets_[s]);
          in_active[s] = 1;
          added = true;
        }
      }
      if (!added) return sol;
    }
  }

  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return max_weight_matching_dp(inst_.meta.num_vertices, pairs_, weights);
  }

 private:
  void enumerate_odd_sets() {
    const size_t nv = inst_.meta.num_vertices;
    for (uint32_t mask = 1; mask < (1u << nv); ++mask) {
      int size = std::popcount(mask);
      if (size < 3 || size % 2 == 0) continue;
      std::vector<size_t> inside;
      for (size_t j = 0; j < pairs_.size(); ++j)
        if ((mask >> pairs_[j].first & 1u) && (mask >> pairs_[j].second & 1u)) inside.push_back(j);
      // With |E(S)| <= (|S|-1)/2 the row follows from x <= 1.
      if (inside.size() <= static_cast<size_t>(size / 2)) continue;
      odd_sets_.push_back(mask);
      edges_inside_.push_back(std::move(inside));
    }
  }

  PackingInstance with_rows(const std::vector<uint32_t>& sets) const {
    PackingInstance aug = inst_;
    aug.n = inst_.n + sets.size();
    aug.A = Matrix<int64_t>(aug.n, inst_.m, 0);
    for (size_t i = 0; i < inst_.n; ++i)
      for (size_t j = 0; j < inst_.m; ++j) aug.A(i, j) = inst_.A(i, j);
    for (size_t s = 0; s < sets.size(); ++s) {
      for (size_t j = 0; j < pairs_.size(); ++j)
        if ((sets[s] >> pairs_[j].first & 1u) && (sets[s] >> pairs_[j].second & 1u))
          aug.A(inst_.n + s, j) = 1;
      aug.b.push_back(std::popcount(sets[s]) / 2);
    }
    return aug;
  }

  bool use_odd_sets_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<uint32_t> odd_sets_;
  std::vector<std::vector<size_t>> edges_inside_;
};

/// k-uniform hypergraph matching with vertex rows only.
class HypergraphAdapter : public ProblemAdapter {
 public:
  explicit HypergraphAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)) {
    alpha_ = std::max(reference_alpha(), cardinality_alpha());
  }
  std::string name() const override { return "k-hypergraph"; }
  double alpha() const override { return alpha_; }

  double reference_alpha() const override {
    double k = static_cast<double>(std::max<size_t>(inst_.meta.k, 1));
    return 1.0 / (k - 1.0 + 1.0 / k);
  }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return engine_relaxation(weights, false);
  }
  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    size_t positive = 0;
    for (int64_t w : weights) positive += w > 0;
    if (positive <= kMaxBruteForceItems) return brute_force_packing(inst_.A, inst_.b, weights);
    return branch_and_bound_packing(inst_.A, inst_.b, weights);
  }

 private:
  double alpha_ = 1.0;
};

/// k-column-sparse PIP. Unit bounds are explicit rows of the relaxation
/// and query probabilities are scaled by w.
class KCspipAdapter : public ProblemAdapter {
 public:
  explicit KCspipAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)) {
    auto report = validate_instance(inst_);
    if (!report.scale_w) throw StructuralError("k-cspip instance has no finite scale w");
    w_ = *report.scale_w;
    alpha_ = cardinality_alpha();
  }
  std::string name() const override { return "k-cspip"; }
  double scale_w() const override { return w_; }
  double alpha() const override { return alpha_; }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return engine_relaxation(weights, true);
  }
  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    return brute_force_packing(inst_.A, inst_.b, weights);
  }

 private:
  double w_ = 1.0;
  double alpha_ = 1.0;
};

/// Maximum-weight independent set. Greedy is optimal over the matroid
/// polytope, so it serves as both relaxation and rounding.
class MatroidAdapter : public ProblemAdapter {
 public:
  explicit MatroidAdapter(PackingInstance inst) : ProblemAdapter(std::move(inst)) {
    if (!inst_.meta.matroid) throw StructuralError("matroid instance lacks a description");
    inst_.meta.matroid->check();
  }
  std::string name() const override { return "matroid"; }

  LpSolution<double> solve_relaxation(std::span<const int64_t> weights) const override {
    auto r = round_integral(weights);
    LpSolution<double> sol;
    sol.x.assign(r.x.begin(), r.x.end());
    sol.value = static_cast<double>(r.value);
    return sol;
  }
  IntegralSolution round_integral(std::span<const int64_t> weights) const override {
    check_weights(weights);
    IntegralSolution out;
    out.x = matroid_greedy(*inst_.meta.matroid, weights);
    for (size_t j = 0; j < out.x.size(); ++j)
      if (out.x[j]) out.value += weights[j];
    return out;
  }
};

/// Adapter for the instance's family tag.
inline std::shared_ptr<const ProblemAdapter> make_adapter(const PackingInstance& inst) {
  switch (inst.family) {
    case Family::kGeneric: return std::make_shared<GenericAdapter>(inst);
    case Family::kBipartiteMatching: return std::make_shared<BipartiteAdapter>(inst);
    case Family::kNonbipartiteMatching: return std::make_shared<BlossomAdapter>(inst);
    case Family::kKHypergraph: return std::make_shared<HypergraphAdapter>(inst);
    case Family::kKCspip: return std::make_shared<KCspipAdapter>(inst);
    case Family::kMatroid: return std::make_shared<MatroidAdapter>(inst);
  }
  throw StructuralError("unknown family");
}

}  // namespace stochpack
