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
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stochpack/common.hpp"

namespace stochpack {

enum class MatroidKind { kUniform, kPartition, kGraphic };

inline std::string to_string(MatroidKind kind) {
  switch (kind) {
    case MatroidKind::kUniform: return "uniform";
    case MatroidKind::kPartition: return "partition";
    case MatroidKind::kGraphic: return "graphic";
  }
  return "?";
}

// Graphic matroids enumerate one rank row per vertex subset.
inline constexpr size_t kMaxGraphicVertices = 12;

/// A matroid on ground set {0, ..., ground_size - 1}.
///   uniform:   independent iff |S| <= rank
///   partition: independent iff |S cap block_b| <= capacities[b] for all b
///   graphic:   element j is edge graph_edges[j]; independent iff acyclic
struct MatroidDescription {
  MatroidKind kind = MatroidKind::kUniform;
  size_t ground_size = 0;
  size_t rank = 0;
  std::vector<size_t> block_of;
  std::vector<int64_t> capacities;
  size_t num_vertices = 0;
  std::vector<std::pair<int, int>> graph_edges;

  static MatroidDescription uniform(size_t m, size_t r) {
    MatroidDescription d;
    d.kind = MatroidKind::kUniform;
    d.ground_size = m;
    d.rank = r;
    return d;
  }

  static MatroidDescription partition(std::vector<size_t> block_of,
                                      std::vector<int64_t> capacities) {
    MatroidDescription d;
    d.kind = MatroidKind::kPartition;
    d.ground_size = block_of.size();
    d.block_of = std::move(block_of);
    d.capacities = std::move(capacities);
    return d;
  }

  static MatroidDescription graphic(size_t num_vertices,
                                    std::vector<std::pair<int, int>> edges) {
    MatroidDescription d;
    d.kind = MatroidKind::kGraphic;
    d.ground_size = edges.size();
    d.num_vertices = num_vertices;
    d.graph_edges = std::move(edges);
    return d;
  }

  /// Throws StructuralError if the parameters do not describe a matroid.
  void check() const {
    switch (kind) {
      case MatroidKind::kUniform:
        break;
      case MatroidKind::kPartition:
        if (block_of.size() != ground_size)
          throw StructuralError("partition matroid: block_of size != ground size");
        for (size_t b : block_of)
          if (b >= capacities.size())
            throw StructuralError("partition matroid: block index out of range");
        for (int64_t c : capacities)
          if (c < 0) throw StructuralError("partition matroid: negative capacity");
        break;
      case MatroidKind::kGraphic:
        if (graph_edges.size() != ground_size)
          throw StructuralError("graphic matroid: edge count != ground size");
        if (num_vertices > kMaxGraphicVertices)
          throw SizeLimitError("graphic matroid: more than " +
                               std::to_string(kMaxGraphicVertices) + " vertices");
        for (auto [u, v] : graph_edges) {
          if (u < 0 || v < 0 || static_cast<size_t>(u) >= num_vertices ||
              static_cast<size_t>(v) >= num_vertices)
            throw StructuralError("graphic matroid: edge endpoint out of range");
          if (u == v) throw StructuralError("graphic matroid: loops are not allowed");
        }
        break;
    }
  }

  bool is_independent(std::span<const uint8_t> member) const {
    switch (kind) {
      case MatroidKind::kUniform:
        return static_cast<size_t>(std::count(member.begin(), member.end(), 1)) <= rank;
      case MatroidKind::kPartition: {
        std::vector<int64_t> used(capacities.size(), 0);
        for (size_t j = 0; j < ground_size; ++j)
          if (member[j] && ++used[block_of[j]] > capacities[block_of[j]]) return false;
        return true;
      }
      case MatroidKind::kGraphic: {
        std::vector<int> parent(num_vertices);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
          while (parent[v] != v) v = parent[v] = parent[parent[v]];
          return v;
        };
        for (size_t j = 0; j < ground_size; ++j) {
          if (!member[j]) continue;
          int a = find(graph_edges[j].first);
          int b = find(graph_edges[j].second);
          if (a == b) return false;
          parent[a] = b;
        }
        return true;
      }
    }
    return false;
  }

  /// Rank of a subset via greedy augmentation (valid for any matroid).
  size_t rank_of(std::span<const uint8_t> subset) const {
    std::vector<uint8_t> current(ground_size, 0);
    size_t r = 0;
    for (size_t j = 0; j < ground_size; ++j) {
      if (!subset[j]) continue;
      current[j] = 1;
      if (is_independent(current)) {
        ++r;
      } else {
        current[j] = 0;
      }
    }
    return r;
  }

  /// Rows of the matroid polytope used as the explicit constraint matrix:
  /// the defining sets (ground set / blocks / induced edge sets) plus unit
  /// rows, each paired with its rank.
  std::vector<std::pair<std::vector<size_t>, int64_t>> polytope_rows() const {
    std::vector<std::pair<std::vector<size_t>, int64_t>> rows;
    auto all = [&]() {
      std::vector<size_t> s(ground_size);
      std::iota(s.begin(), s.end(), 0);
      return s;
    };
    switch (kind) {
      case MatroidKind::kUniform:
        rows.emplace_back(all(), static_cast<int64_t>(rank));
        for (size_t j = 0; j < ground_size; ++j) rows.push_back({{j}, 1});
        break;
      case MatroidKind::kPartition:
        for (size_t b = 0; b < capacities.size(); ++b) {
          std::vector<size_t> members;
          for (size_t j = 0; j < ground_size; ++j)
            if (block_of[j] == b) members.push_back(j);
          if (!members.empty()) rows.emplace_back(std::move(members), capacities[b]);
        }
        for (size_t j = 0; j < ground_size; ++j) rows.push_back({{j}, 1});
        break;
      case MatroidKind::kGraphic: {
        // x(E(S)) <= |S| - 1 for every vertex set S inducing an edge.
        for (uint32_t mask = 1; mask < (1u << num_vertices); ++mask) {
          if (std::popcount(mask) < 2) continue;
          std::vector<size_t> members;
          for (size_t j = 0; j < ground_size; ++j) {
            auto [u, v] = graph_edges[j];
            if ((mask >> u & 1u) && (mask >> v & 1u)) members.push_back(j);
          }
          if (!members.empty())
            rows.emplace_back(std::move(members), std::popcount(mask) - 1);
        }
        break;
      }
    }
    return rows;
  }
};

/// Maximum-weight independent set by the greedy algorithm. Only positive
/// weights are considered; ties break toward the smaller index.
inline std::vector<uint8_t> matroid_greedy(const MatroidDescription& matroid,
                                           std::span<const int64_t> weights) {
  std::vector<size_t> order;
  for (size_t j = 0; j < matroid.ground_size; ++j)
    if (weights[j] > 0) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return weights[a] > weights[b]; });
  std::vector<uint8_t> chosen(matroid.ground_size, 0);
  for (size_t j : order) {
    chosen[j] = 1;
    if (!matroid.is_independent(chosen)) chosen[j] = 0;
  }
  return chosen;
}

}  // namespace stochpack
