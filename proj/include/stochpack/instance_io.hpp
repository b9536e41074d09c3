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

// JSON instance files. A is stored as sparse (row, col, value) triples;
// unknown keys are rejected at every level.

#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stochpack/instance.hpp"
#include "stochpack/matroid.hpp"

namespace stochpack {

using Json = nlohmann::json;

/// File read/write failures, distinct from malformed content.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  PackingInstance instance;
  std::optional<StochasticObjective> objective;

  bool operator==(const InstanceFile&) const = default;
};

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!j.is_object()) throw StructuralError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok |= it.key() == a;
    if (!ok) throw StructuralError("unknown field '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw StructuralError("missing field '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw StructuralError("field '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

inline Json matroid_to_json(const MatroidDescription& d) {
  Json j;
  j["kind"] = to_string(d.kind);
  j["ground_size"] = d.ground_size;
  switch (d.kind) {
    case MatroidKind::kUniform:
      j["rank"] = d.rank;
      break;
    case MatroidKind::kPartition:
      j["block_of"] = d.block_of;
      j["capacities"] = d.capacities;
      break;
    case MatroidKind::kGraphic: {
      j["num_vertices"] = d.num_vertices;
      Json es = Json::array();
      for (auto [u, v] : d.graph_edges) es.push_back({u, v});
      j["graph_edges"] = es;
      break;
    }
  }
  return j;
}

inline MatroidDescription matroid_from_json(const Json& j) {
  const std::string where = "meta.matroid";
  reject_unknown(j, {"kind", "ground_size", "rank", "block_of", "capacities", "num_vertices",
                     "graph_edges"},
                 where);
  auto kind = get_field<std::string>(j, "kind", where);
  auto m = get_field<size_t>(j, "ground_size", where);
  MatroidDescription d;
  if (kind == "uniform") {
    d = MatroidDescription::uniform(m, get_field<size_t>(j, "rank", where));
  } else if (kind == "partition") {
    d = MatroidDescription::partition(get_field<std::vector<size_t>>(j, "block_of", where),
                                      get_field<std::vector<int64_t>>(j, "capacities", where));
  } else if (kind == "graphic") {
    std::vector<std::pair<int, int>> es;
    for (const auto& e : get_field<std::vector<std::vector<int>>>(j, "graph_edges", where)) {
      if (e.size() != 2) throw StructuralError("graphic matroid edge is not a pair");
      es.push_back({e[0], e[1]});
    }
    d = MatroidDescription::graphic(get_field<size_t>(j, "num_vertices", where), std::move(es));
  } else {
    throw StructuralError("unknown matroid kind '" + kind + "'");
  }
  if (d.ground_size != m) throw StructuralError("matroid ground_size disagrees with its data");
  d.check();
  return d;
}

}  // namespace detail

inline Json to_json(const InstanceFile& file) {
  const auto& inst = file.instance;
  Json j;
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["family"] = to_string(inst.family);
  Json triples = Json::array();
  for (size_t i = 0; i < inst.n; ++i)
    for (size_t c = 0; c < inst.m; ++c)
      if (inst.A(i, c) != 0) triples.push_back({i, c, inst.A(i, c)});
  j["A"] = triples;
  j["b"] = inst.b;
  if (file.objective) {
    std::vector<int64_t> lo(file.objective->c_minus().begin(), file.objective->c_minus().end());
    std::vector<int64_t> hi(file.objective->c_plus().begin(), file.objective->c_plus().end());
    j["c_minus"] = lo;
    j["c_plus"] = hi;
    j["p"] = file.objective->p();
  }
  Json meta = Json::object();
  const auto& md = inst.meta;
  if (md.num_vertices) meta["num_vertices"] = md.num_vertices;
  if (md.left_size) meta["left_size"] = md.left_size;
  if (!md.edges.empty()) meta["edges"] = md.edges;
  if (md.k) meta["k"] = md.k;
  if (md.matroid) meta["matroid"] = detail::matroid_to_json(*md.matroid);
  j["meta"] = meta;
  return j;
}

inline InstanceFile instance_from_json_unchecked(const Json& j) {
  const std::string where = "instance";
  detail::reject_unknown(j, {"n", "m", "family", "A", "b", "c_minus", "c_plus", "p", "meta"}, where);
  InstanceFile file;
  auto& inst = file.instance;
  inst.n = detail::get_field<size_t>(j, "n", where);
  inst.m = detail::get_field<size_t>(j, "m", where);
  inst.family = family_from_string(detail::get_field<std::string>(j, "family", where));
  inst.A = Matrix<int64_t>(inst.n, inst.m, 0);
  for (const auto& t : detail::get_field<std::vector<std::vector<int64_t>>>(j, "A", where)) {
    if (t.size() != 3) throw StructuralError("A entries must be (row, col, value) triples");
    if (t[0] < 0 || t[1] < 0 || static_cast<size_t>(t[0]) >= inst.n ||
        static_cast<size_t>(t[1]) >= inst.m)
      throw StructuralError("A triple (" + std::to_string(t[0]) + ", " + std::to_string(t[1]) +
                            ") out of range");
    inst.A(static_cast<size_t>(t[0]), static_cast<size_t>(t[1])) = t[2];
  }
  inst.b = detail::get_field<std::vector<int64_t>>(j, "b", where);
  if (j.contains("meta")) {
    const auto& mj = j.at("meta");
    detail::reject_unknown(mj, {"num_vertices", "left_size", "edges", "k", "matroid"}, "meta");
    if (mj.contains("num_vertices")) inst.meta.num_vertices = mj.at("num_vertices").get<size_t>();
    if (mj.contains("left_size")) inst.meta.left_size = mj.at("left_size").get<size_t>();
    if (mj.contains("edges")) inst.meta.edges = mj.at("edges").get<std::vector<std::vector<int>>>();
    if (mj.contains("k")) inst.meta.k = mj.at("k").get<size_t>();
    if (mj.contains("matroid")) inst.meta.matroid = detail::matroid_from_json(mj.at("matroid"));
  }
  check_dimensions(inst);
  const bool has_lo = j.contains("c_minus"), has_hi = j.contains("c_plus"), has_p = j.contains("p");
  if (has_lo || has_hi || has_p) {
    if (!(has_lo && has_hi && has_p))
      throw StructuralError("c_minus, c_plus and p must appear together");
    try {
      file.objective.emplace(detail::get_field<std::vector<int64_t>>(j, "c_minus", where),
                             detail::get_field<std::vector<int64_t>>(j, "c_plus", where),
                             detail::get_field<double>(j, "p", where));
    } catch (const std::invalid_argument& e) {
      throw StructuralError(std::string("objective: ") + e.what());
    }
    if (file.objective->size() != inst.m)
      throw StructuralError("objective length differs from m");
  }
  return file;
}

inline InstanceFile instance_from_json(const Json& j) {
  try {
    return instance_from_json_unchecked(j);
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw StructuralError(e.what());
  }
}

inline InstanceFile parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw StructuralError(std::string("instance is not valid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline InstanceFile load_instance(const std::string& path) {
  return parse_instance(read_text_file(path));
}

inline void save_instance(const std::string& path, const InstanceFile& file) {
  write_text_file(path, to_json(file).dump(2) + "\n");
}

}  // namespace stochpack
