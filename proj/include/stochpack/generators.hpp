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

// Seeded instance generators for every supported family.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochpack/instance.hpp"
#include "stochpack/instance_io.hpp"
#include "stochpack/matroid.hpp"
#include "stochpack/random.hpp"

namespace stochpack {

/// Every (u, v) pair appears independently with probability edge_prob,
/// visited left-major.
inline PackingInstance generate_bipartite(size_t n1, size_t n2, double edge_prob, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (size_t u = 0; u < n1; ++u)
    for (size_t v = 0; v < n2; ++v)
      if (rng.uniform01() < edge_prob) edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  return make_bipartite_instance(n1, n2, edges);
}

/// Erdos-Renyi graph on n vertices.
inline PackingInstance generate_graph(size_t n, double edge_prob, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (size_t u = 0; u < n; ++u)
    for (size_t v = u + 1; v < n; ++v)
      if (rng.uniform01() < edge_prob) edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  return make_graph_instance(n, edges);
}

/// m distinct k-subsets of n vertices, uniformly at random.
inline PackingInstance generate_hypergraph(size_t n, size_t m, size_t k, uint64_t seed) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  double total = 1.0;
  for (size_t i = 0; i < k; ++i) total = total * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (static_cast<double>(m) > total) throw std::invalid_argument("more hyperedges than k-subsets");
  Rng rng(seed);
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> edges;
  std::vector<int> perm(n);
  while (edges.size() < m) {
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = 0; i < k; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
    std::vector<int> e(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(e.begin(), e.end());
    if (seen.insert(e).second) edges.push_back(std::move(e));
  }
  return make_hypergraph_instance(n, k, std::move(edges));
}

inline PackingInstance generate_uniform_matroid(size_t m, size_t r) {
  return make_matroid_instance(MatroidDescription::uniform(m, r));
}

/// Ground set split uniformly at random into `blocks` blocks, each with
/// the same capacity.
inline PackingInstance generate_partition_matroid(size_t m, size_t blocks, int64_t capacity,
                                                  uint64_t seed) {
  if (blocks == 0) throw std::invalid_argument("need at least one block");
  Rng rng(seed);
  std::vector<size_t> block_of(m);
  for (auto& b : block_of) b = rng.below(blocks);
  return make_matroid_instance(
      MatroidDescription::partition(std::move(block_of), std::vector<int64_t>(blocks, capacity)));
}

inline PackingInstance generate_graphic_matroid(size_t n, double edge_prob, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (size_t u = 0; u < n; ++u)
    for (size_t v = u + 1; v < n; ++v)
      if (rng.uniform01() < edge_prob) edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  return make_matroid_instance(MatroidDescription::graphic(n, std::move(edges)));
}

/// Column j touches between 1 and k random rows with a_ij in [1, b_i].
inline PackingInstance generate_kcspip(size_t n, size_t m, size_t k, int64_t max_b, uint64_t seed) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (max_b < 1) throw std::invalid_argument("max_b must be positive");
  Rng rng(seed);
  std::vector<int64_t> b(n);
  for (auto& v : b) v = rng.between(1, max_b);
  Matrix<int64_t> A(n, m, 0);
  std::vector<size_t> perm(n);
  for (size_t j = 0; j < m; ++j) {
    size_t s = 1 + rng.below(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = 0; i < s; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
    for (size_t i = 0; i < s; ++i) A(perm[i], j) = rng.between(1, b[perm[i]]);
  }
  return make_kcspip_instance(std::move(A), std::move(b), k);
}

/// Dense random packing matrix. Each column has one tight row with
/// a_ij = b_i so that x <= 1 is implied; other entries are in [0, b_i].
inline PackingInstance generate_generic(size_t n, size_t m, double density, int64_t max_b,
                                        uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one row");
  if (max_b < 1) throw std::invalid_argument("max_b must be positive");
  Rng rng(seed);
  std::vector<int64_t> b(n);
  for (auto& v : b) v = rng.between(1, max_b);
  Matrix<int64_t> A(n, m, 0);
  for (size_t j = 0; j < m; ++j) {
    size_t tight = rng.below(n);
    for (size_t i = 0; i < n; ++i) {
      if (i == tight) {
        A(i, j) = b[i];
      } else if (rng.uniform01() < density) {
        A(i, j) = rng.between(0, b[i]);
      }
    }
  }
  return make_explicit_instance(std::move(A), std::move(b), Family::kGeneric);
}

struct PlantedBipartite {
  PackingInstance instance;
  std::vector<size_t> planted;  // item ids of the planted matching
};

/// A random matching of size `planted` between the sides, plus noise
/// edges present independently with probability noise_prob.
inline PlantedBipartite generate_planted_bipartite(size_t n1, size_t n2, size_t planted,
                                                   double noise_prob, uint64_t seed) {
  if (planted > std::min(n1, n2)) throw std::invalid_argument("planted matching too large");
  Rng rng(seed);
  std::vector<int> left(n1), right(n2);
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), 0);
  for (size_t i = 0; i < planted; ++i) {
    std::swap(left[i], left[i + rng.below(n1 - i)]);
    std::swap(right[i], right[i + rng.below(n2 - i)]);
  }
  std::set<std::pair<int, int>> plant;
  for (size_t i = 0; i < planted; ++i) plant.insert({left[i], right[i]});
  std::vector<std::pair<int, int>> edges;
  PlantedBipartite out;
  for (size_t u = 0; u < n1; ++u) {
    for (size_t v = 0; v < n2; ++v) {
      std::pair<int, int> e{static_cast<int>(u), static_cast<int>(v)};
      bool is_planted = plant.count(e) > 0;
      bool noise = rng.uniform01() < noise_prob;
      if (is_planted) out.planted.push_back(edges.size());
      if (is_planted || noise) edges.push_back(e);
    }
  }
  out.instance = make_bipartite_instance(n1, n2, edges);
  return out;
}

// ---------------------------------------------------------------------------
// Keyword-parameter front end shared by the CLI and experiment specs.

using GenParams = std::map<std::string, std::string>;

namespace detail {

inline std::string param(const GenParams& p, const std::string& key,
                         const std::optional<std::string>& fallback = std::nullopt) {
  auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw std::invalid_argument("missing generator parameter '" + key + "'");
}

inline int64_t iparam(const GenParams& p, const std::string& key,
                      std::optional<int64_t> fallback = std::nullopt) {
  auto s = param(p, key, fallback ? std::optional<std::string>(std::to_string(*fallback))
                                  : std::nullopt);
  size_t pos = 0;
  int64_t v = std::stoll(s, &pos);
  if (pos != s.size() || v < 0)
    throw std::invalid_argument("parameter '" + key + "' must be a nonnegative integer");
  return v;
}

inline double dparam(const GenParams& p, const std::string& key,
                     std::optional<double> fallback = std::nullopt) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw std::invalid_argument("missing generator parameter '" + key + "'");
  }
  return to_double(parse_rational(it->second));
}

inline void allow_only(const GenParams& p, std::initializer_list<const char*> keys,
                       const std::string& kind) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : keys) ok |= k == a;
    if (!ok) throw std::invalid_argument("unknown parameter '" + k + "' for generator " + kind);
  }
}

}  // namespace detail

inline constexpr int kGeneratorRetries = 16;

/// Dispatch on a generator kind. Instances that fail validation are
/// regenerated with a bumped sub-seed, up to kGeneratorRetries times.
inline PackingInstance generate(const std::string& kind, const GenParams& params, uint64_t seed) {
  using namespace detail;
  auto once = [&](uint64_t s) -> PackingInstance {
    if (kind == "bipartite") {
      allow_only(params, {"n1", "n2", "edge_prob"}, kind);
      return generate_bipartite(iparam(params, "n1"), iparam(params, "n2"),
                                dparam(params, "edge_prob"), s);
    }
    if (kind == "graph") {
      allow_only(params, {"n", "edge_prob"}, kind);
      return generate_graph(iparam(params, "n"), dparam(params, "edge_prob"), s);
    }
    if (kind == "k-hypergraph" || kind == "hypergraph") {
      allow_only(params, {"n", "m", "k"}, kind);
      return generate_hypergraph(iparam(params, "n"), iparam(params, "m"), iparam(params, "k"), s);
    }
    if (kind == "matroid") {
      allow_only(params, {"kind", "m", "r", "blocks", "capacity", "n", "edge_prob"}, kind);
      auto mk = param(params, "kind");
      if (mk == "uniform") return generate_uniform_matroid(iparam(params, "m"), iparam(params, "r"));
      if (mk == "partition")
        return generate_partition_matroid(iparam(params, "m"), iparam(params, "blocks"),
                                          iparam(params, "capacity", 1), s);
      if (mk == "graphic")
        return generate_graphic_matroid(iparam(params, "n"), dparam(params, "edge_prob"), s);
      throw std::invalid_argument("unknown matroid kind '" + mk + "'");
    }
    if (kind == "k-cspip" || kind == "kcspip") {
      allow_only(params, {"n", "m", "k", "max_b"}, kind);
      return generate_kcspip(iparam(params, "n"), iparam(params, "m"), iparam(params, "k"),
                             iparam(params, "max_b", 3), s);
    }
    if (kind == "generic") {
      allow_only(params, {"n", "m", "density", "max_b"}, kind);
      return generate_generic(iparam(params, "n"), iparam(params, "m"),
                              dparam(params, "density", 0.5), iparam(params, "max_b", 3), s);
    }
    if (kind == "planted-bipartite") {
      allow_only(params, {"n1", "n2", "planted", "noise_prob"}, kind);
      return generate_planted_bipartite(iparam(params, "n1"), iparam(params, "n2"),
                                        iparam(params, "planted"), dparam(params, "noise_prob"), s)
          .instance;
    }
    if (kind == "explicit") {
      allow_only(params, {"file"}, kind);
      return load_instance(param(params, "file")).instance;
    }
    throw std::invalid_argument("unknown generator kind '" + kind + "'");
  };
  std::string last;
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    auto inst = once(attempt == 0 ? seed : splitmix64(seed + static_cast<uint64_t>(attempt)));
    auto report = validate_instance(inst);
    if (report.ok()) return inst;
    last = report.violations.front().detail;
  }
  throw StructuralError("generator '" + kind + "' produced no valid instance after " +
                        std::to_string(kGeneratorRetries) + " attempts: " + last);
}

/// Parses "key=value" tokens.
inline GenParams parse_gen_params(const std::vector<std::string>& tokens) {
  GenParams p;
  for (const auto& t : tokens) {
    auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("generator parameter '" + t + "' is not key=value");
    p[t.substr(0, eq)] = t.substr(eq + 1);
  }
  return p;
}

}  // namespace stochpack
