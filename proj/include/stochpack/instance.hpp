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

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochpack/common.hpp"
#include "stochpack/matroid.hpp"
#include "stochpack/random.hpp"

namespace stochpack {

enum class Family {
  kGeneric,
  kBipartiteMatching,
  kNonbipartiteMatching,
  kKHypergraph,
  kKCspip,
  kMatroid,
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::kGeneric: return "generic";
    case Family::kBipartiteMatching: return "bipartite-matching";
    case Family::kNonbipartiteMatching: return "nonbipartite-matching";
    case Family::kKHypergraph: return "k-hypergraph";
    case Family::kKCspip: return "k-cspip";
    case Family::kMatroid: return "matroid";
  }
  return "?";
}

inline Family family_from_string(const std::string& s) {
  for (Family f : {Family::kGeneric, Family::kBipartiteMatching,
                   Family::kNonbipartiteMatching, Family::kKHypergraph,
                   Family::kKCspip, Family::kMatroid})
    if (to_string(f) == s) return f;
  throw StructuralError("unknown family '" + s + "'");
}

/// Family-specific payload. For the graph families every item is an edge
/// (a 2-set of vertices), for k-hypergraph a k-set; vertices index rows.
struct InstanceMeta {
  size_t num_vertices = 0;
  size_t left_size = 0;  // bipartite: vertices [0, left_size) form one side
  std::vector<std::vector<int>> edges;
  size_t k = 0;  // hyperedge uniformity / column sparsity
  std::optional<MatroidDescription> matroid;

  bool operator==(const InstanceMeta& o) const {
    auto same_matroid = [&]() {
      if (matroid.has_value() != o.matroid.has_value()) return false;
      if (!matroid) return true;
      const auto& a = *matroid;
      const auto& b = *o.matroid;
      return a.kind == b.kind && a.ground_size == b.ground_size && a.rank == b.rank &&
             a.block_of == b.block_of && a.capacities == b.capacities &&
             a.num_vertices == b.num_vertices && a.graph_edges == b.graph_edges;
    };
    return num_vertices == o.num_vertices && left_size == o.left_size &&
           edges == o.edges && k == o.k && same_matroid();
  }
};

/// max c.x s.t. A x <= b, x in {0,1}^m with A >= 0 integral and b >= 1.
struct PackingInstance {
  size_t n = 0;  // rows
  size_t m = 0;  // items
  Matrix<int64_t> A;
  std::vector<int64_t> b;
  Family family = Family::kGeneric;
  InstanceMeta meta;

  /// Rows i with a_ij > 0, per column.
  std::vector<std::vector<size_t>> column_supports() const {
    std::vector<std::vector<size_t>> supp(m);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < m; ++j)
        if (A(i, j) != 0) supp[j].push_back(i);
    return supp;
  }

  bool operator==(const PackingInstance&) const = default;
};

inline void check_dimensions(const PackingInstance& inst) {
  if (inst.A.rows() != inst.n || inst.A.cols() != inst.m)
    throw StructuralError("A is " + std::to_string(inst.A.rows()) + "x" +
                          std::to_string(inst.A.cols()) + ", expected " +
                          std::to_string(inst.n) + "x" + std::to_string(inst.m));
  if (inst.b.size() != inst.n)
    throw StructuralError("b has length " + std::to_string(inst.b.size()) +
                          ", expected " + std::to_string(inst.n));
  for (size_t i = 0; i < inst.n; ++i)
    for (size_t j = 0; j < inst.m; ++j)
      if (inst.A(i, j) < 0)
        throw StructuralError("negative entry in A at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
}

/// Largest per-column scale max_j min_{i: a_ij > 0} b_i / a_ij. Infinite
/// when some column is empty.
inline double column_scale_w(const PackingInstance& inst) {
  double w = 0.0;
  for (size_t j = 0; j < inst.m; ++j) {
    double wj = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < inst.n; ++i)
      if (inst.A(i, j) > 0)
        wj = std::min(wj, static_cast<double>(inst.b[i]) / static_cast<double>(inst.A(i, j)));
    w = std::max(w, wj);
  }
  return inst.m == 0 ? 1.0 : w;
}

struct Violation {
  char condition;  // 'a': b >= 1, 'b': A chi_j <= b, 'c': x <= 1 implied
  std::optional<size_t> row;
  std::optional<size_t> column;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::optional<double> scale_w;  // k-cspip only

  bool ok() const { return violations.empty(); }
  bool violates(char condition) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.condition == condition; });
  }
};

/// Checks the standing assumptions. Dimension problems throw
/// StructuralError; assumption failures are reported with row/column
/// witnesses. Condition c is checked in its sufficient form (some row with
/// a_ij = b_i) and is replaced by a finite scale w for k-cspip.
inline ValidationReport validate_instance(const PackingInstance& inst) {
  check_dimensions(inst);
  ValidationReport report;
  for (size_t i = 0; i < inst.n; ++i)
    if (inst.b[i] < 1)
      report.violations.push_back({'a', i, std::nullopt,
                                   "b[" + std::to_string(i) + "] = " +
                                       std::to_string(inst.b[i]) + " < 1"});
  for (size_t j = 0; j < inst.m; ++j) {
    bool fits = true;
    for (size_t i = 0; i < inst.n; ++i) {
      if (inst.A(i, j) > inst.b[i]) {
        report.violations.push_back({'b', i, j,
                                     "a[" + std::to_string(i) + "][" + std::to_string(j) +
                                         "] = " + std::to_string(inst.A(i, j)) + " > b = " +
                                         std::to_string(inst.b[i])});
        fits = false;
        break;
      }
    }
    if (!fits || inst.family == Family::kKCspip) continue;
    bool tight = false;
    for (size_t i = 0; i < inst.n && !tight; ++i)
      tight = inst.A(i, j) > 0 && inst.A(i, j) == inst.b[i];
    if (!tight)
      report.violations.push_back(
          {'c', std::nullopt, j,
           "column " + std::to_string(j) + " has no row with a_ij = b_i"});
  }
  if (inst.family == Family::kKCspip) {
    for (size_t j = 0; j < inst.m; ++j) {
      bool empty = true;
      size_t nonzeros = 0;
      for (size_t i = 0; i < inst.n; ++i)
        if (inst.A(i, j) > 0) {
          empty = false;
          ++nonzeros;
        }
      if (empty)
        report.violations.push_back(
            {'c', std::nullopt, j, "column " + std::to_string(j) + " is empty; w is infinite"});
      if (inst.meta.k > 0 && nonzeros > inst.meta.k)
        report.violations.push_back({'c', std::nullopt, j,
                                     "column " + std::to_string(j) + " has " +
                                         std::to_string(nonzeros) + " nonzeros > k = " +
                                         std::to_string(inst.meta.k)});
    }
    if (!report.violates('c')) report.scale_w = column_scale_w(inst);
  }
  return report;
}

/// Per-item integer interval [c_minus, c_plus] and the lower bound p on the
/// probability of realizing c_plus.
class StochasticObjective {
 public:
  StochasticObjective() = default;
  StochasticObjective(std::vector<int64_t> c_minus, std::vector<int64_t> c_plus, double p)
      : c_minus_(std::move(c_minus)), c_plus_(std::move(c_plus)), p_(p) {
    if (c_minus_.size() != c_plus_.size())
      throw StructuralError("c_minus and c_plus differ in length");
    if (!(p_ > 0.0 && p_ <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    for (size_t j = 0; j < c_minus_.size(); ++j) {
      if (c_minus_[j] < 0 || c_minus_[j] > c_plus_[j])
        throw std::invalid_argument("need 0 <= c_minus <= c_plus at item " + std::to_string(j));
      delta_c_ = std::max(delta_c_, c_plus_[j] - c_minus_[j]);
    }
  }

  /// Same interval for every item.
  static StochasticObjective uniform(size_t m, int64_t lo, int64_t hi, double p) {
    return {std::vector<int64_t>(m, lo), std::vector<int64_t>(m, hi), p};
  }

  size_t size() const { return c_minus_.size(); }
  std::span<const int64_t> c_minus() const { return c_minus_; }
  std::span<const int64_t> c_plus() const { return c_plus_; }
  double p() const { return p_; }
  int64_t delta_c() const { return delta_c_; }
  int64_t c_max() const {
    return c_plus_.empty() ? 0 : *std::max_element(c_plus_.begin(), c_plus_.end());
  }

  bool operator==(const StochasticObjective&) const = default;

 private:
  std::vector<int64_t> c_minus_;
  std::vector<int64_t> c_plus_;
  double p_ = 1.0;
  int64_t delta_c_ = 0;
};

struct Realization {
  std::vector<int64_t> c;
  uint64_t seed = 0;
};

/// Draws one item value on [lo, hi]; must put mass >= p on hi.
using ItemDistribution =
    std::function<int64_t(int64_t lo, int64_t hi, double p, Rng& rng)>;

/// Canonical two-point law: hi with probability p, lo otherwise.
inline int64_t two_point(int64_t lo, int64_t hi, double p, Rng& rng) {
  return rng.bernoulli(p) ? hi : lo;
}

/// hi with probability p, otherwise uniform over [lo, hi].
inline int64_t upper_or_uniform(int64_t lo, int64_t hi, double p, Rng& rng) {
  return rng.bernoulli(p) ? hi : rng.between(lo, hi);
}

inline constexpr uint64_t kDefaultNatureSeed = 20240607;

/// Independent per-item draws. The generator is consulted exactly once per
/// item, in index order.
inline Realization sample_realization(const StochasticObjective& obj, uint64_t seed,
                                      const ItemDistribution& dist = two_point) {
  Rng rng(seed);
  Realization r{std::vector<int64_t>(obj.size()), seed};
  for (size_t j = 0; j < obj.size(); ++j) {
    int64_t v = dist(obj.c_minus()[j], obj.c_plus()[j], obj.p(), rng);
    if (v < obj.c_minus()[j] || v > obj.c_plus()[j])
      throw std::logic_error("item distribution left the interval at item " +
                             std::to_string(j));
    r.c[j] = v;
  }
  return r;
}

/// The only gateway to nature's hidden draw. Queries are idempotent: the
/// ledger counts distinct reveals.
class QueryOracle {
 public:
  QueryOracle(const PackingInstance& inst, Realization realization)
      : realization_(std::move(realization)),
        supports_(inst.column_supports()),
        revealed_(inst.m, 0),
        row_queries_(inst.n, 0) {
    if (realization_.c.size() != inst.m)
      throw StructuralError("realization length does not match item count");
  }

  int64_t query(size_t j) {
    if (!revealed_.at(j)) {
      revealed_[j] = 1;
      ++total_;
      for (size_t i : supports_[j]) ++row_queries_[i];
    }
    return realization_.c[j];
  }

  bool is_revealed(size_t j) const { return revealed_.at(j) != 0; }
  std::optional<int64_t> revealed_value(size_t j) const {
    if (!is_revealed(j)) return std::nullopt;
    return realization_.c[j];
  }
  std::span<const uint8_t> revealed_mask() const { return revealed_; }
  size_t size() const { return revealed_.size(); }
  size_t total_queries() const { return total_; }
  std::span<const int64_t> row_queries() const { return row_queries_; }

  /// Nature's full draw. Reserved for evaluation (omniscient baselines,
  /// the witness lab); strategies never call this.
  const Realization& hidden_realization() const { return realization_; }

 private:
  Realization realization_;
  std::vector<std::vector<size_t>> supports_;
  std::vector<uint8_t> revealed_;
  std::vector<int64_t> row_queries_;
  size_t total_ = 0;
};

/// Revealed entries take their realized value, the rest c_plus.
inline std::vector<int64_t> optimistic_vector(const QueryOracle& oracle,
                                              const StochasticObjective& obj) {
  std::vector<int64_t> v(obj.c_plus().begin(), obj.c_plus().end());
  for (size_t j = 0; j < v.size(); ++j)
    if (auto c = oracle.revealed_value(j)) v[j] = *c;
  return v;
}

/// Revealed entries take their realized value, the rest c_minus.
inline std::vector<int64_t> pessimistic_vector(const QueryOracle& oracle,
                                               const StochasticObjective& obj) {
  std::vector<int64_t> v(obj.c_minus().begin(), obj.c_minus().end());
  for (size_t j = 0; j < v.size(); ++j)
    if (auto c = oracle.revealed_value(j)) v[j] = *c;
  return v;
}

// ---------------------------------------------------------------------------
// Instance builders for the supported families.

inline PackingInstance make_explicit_instance(Matrix<int64_t> A, std::vector<int64_t> b,
                                              Family family = Family::kGeneric) {
  PackingInstance inst;
  inst.n = A.rows();
  inst.m = A.cols();
  inst.A = std::move(A);
  inst.b = std::move(b);
  inst.family = family;
  check_dimensions(inst);
  return inst;
}

/// Vertex-edge incidence with unit capacities; one row per vertex.
inline PackingInstance make_incidence_instance(size_t num_vertices,
                                               std::vector<std::vector<int>> edges,
                                               Family family) {
  PackingInstance inst;
  inst.n = num_vertices;
  inst.m = edges.size();
  inst.A = Matrix<int64_t>(num_vertices, edges.size(), 0);
  inst.b.assign(num_vertices, 1);
  inst.family = family;
  size_t k = 0;
  for (size_t j = 0; j < edges.size(); ++j) {
    auto& e = edges[j];
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw StructuralError("edge " + std::to_string(j) + " repeats a vertex");
    for (int v : e) {
      if (v < 0 || static_cast<size_t>(v) >= num_vertices)
        throw StructuralError("edge " + std::to_string(j) + " has vertex out of range");
      inst.A(static_cast<size_t>(v), j) = 1;
    }
    k = std::max(k, e.size());
  }
  inst.meta.num_vertices = num_vertices;
  inst.meta.edges = std::move(edges);
  inst.meta.k = k;
  return inst;
}

/// Left vertices are 0..left-1, right vertices left..left+right-1.
inline PackingInstance make_bipartite_instance(size_t left, size_t right,
                                               const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> es;
  for (auto [u, v] : edges) {
    if (u < 0 || static_cast<size_t>(u) >= left || v < 0 || static_cast<size_t>(v) >= right)
      throw StructuralError("bipartite edge endpoint out of range");
    es.push_back({u, static_cast<int>(left) + v});
  }
  auto inst = make_incidence_instance(left + right, std::move(es), Family::kBipartiteMatching);
  inst.meta.left_size = left;
  inst.meta.k = 2;
  return inst;
}

inline PackingInstance make_graph_instance(size_t num_vertices,
                                           const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> es;
  for (auto [u, v] : edges) es.push_back({u, v});
  auto inst = make_incidence_instance(num_vertices, std::move(es), Family::kNonbipartiteMatching);
  inst.meta.k = 2;
  return inst;
}

inline PackingInstance make_hypergraph_instance(size_t num_vertices, size_t k,
                                                std::vector<std::vector<int>> hyperedges) {
  for (const auto& e : hyperedges)
    if (e.size() != k) throw StructuralError("hyperedge size differs from k");
  auto inst = make_incidence_instance(num_vertices, std::move(hyperedges), Family::kKHypergraph);
  inst.meta.k = k;
  return inst;
}

inline PackingInstance make_matroid_instance(const MatroidDescription& matroid) {
  matroid.check();
  auto rows = matroid.polytope_rows();
  PackingInstance inst;
  inst.n = rows.size();
  inst.m = matroid.ground_size;
  inst.A = Matrix<int64_t>(inst.n, inst.m, 0);
  inst.b.resize(inst.n);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j : rows[i].first) inst.A(i, j) = 1;
    inst.b[i] = rows[i].second;
  }
  inst.family = Family::kMatroid;
  inst.meta.matroid = matroid;
  return inst;
}

inline PackingInstance make_kcspip_instance(Matrix<int64_t> A, std::vector<int64_t> b,
                                            size_t k) {
  auto inst = make_explicit_instance(std::move(A), std::move(b), Family::kKCspip);
  inst.meta.k = k;
  return inst;
}

}  // namespace stochpack
