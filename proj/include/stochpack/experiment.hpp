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

// Monte Carlo experiment orchestration: spec parsing, the trial grid, a
// worker pool, CSV rows and the human summary.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "stochpack/adapters.hpp"
#include "stochpack/generators.hpp"
#include "stochpack/instance.hpp"
#include "stochpack/instance_io.hpp"
#include "stochpack/random.hpp"
#include "stochpack/strategies.hpp"

namespace stochpack {

inline constexpr int kCsvSchemaVersion = 1;

struct InstanceSource {
  std::optional<std::string> file;
  std::string generator;
  GenParams params;
  size_t count = 1;  // generated instances, ids 0..count-1
};

struct ObjectiveParams {
  int64_t c_minus = 0;
  int64_t c_plus = 1;
  double p = 0.5;
  std::string distribution = "two_point";  // or upper_or_uniform
  bool from_file = false;                  // use the objective stored in the file
};

/// A grid point's mode is a strategy or a baseline.
struct GridMode {
  bool baseline = false;
  Mode mode = Mode::kAdaptive;
  BaselineKind baseline_kind = BaselineKind::kOmniscient;

  std::string name() const { return baseline ? to_string(baseline_kind) : to_string(mode); }
};

inline GridMode grid_mode_from_string(const std::string& s) {
  GridMode g;
  if (s == "omniscient" || s == "blind" || s == "uniform_random") {
    g.baseline = true;
    g.baseline_kind = s == "omniscient" ? BaselineKind::kOmniscient
                      : s == "blind"    ? BaselineKind::kBlind
                                        : BaselineKind::kUniformRandom;
  } else {
    g.mode = mode_from_string(s);
  }
  return g;
}

struct ExperimentSpec {
  InstanceSource instance;
  ObjectiveParams objective;
  std::vector<std::string> modes{"adaptive"};
  std::vector<double> epsilon{0.2};
  std::optional<std::vector<double>> epsilon_prime;  // defaults to epsilon
  std::vector<double> delta{0.2};
  std::vector<int64_t> T;                 // empty: recommended T per grid point
  std::vector<double> logM_constant{1.0};
  bool derandomize_integral = false;
  size_t trials = 1;
  uint64_t master_seed = 1;
  std::optional<std::string> csv_path;
  std::optional<std::string> summary_path;

  void check() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (modes.empty() || epsilon.empty() || delta.empty() || logM_constant.empty())
      throw std::invalid_argument("every grid must be non-empty");
    if (epsilon_prime && epsilon_prime->empty())
      throw std::invalid_argument("epsilon_prime grid must be non-empty");
    for (int64_t t : T)
      if (t < 1) throw std::invalid_argument("T must be at least 1");
    if (instance.count < 1) throw std::invalid_argument("instance count must be at least 1");
    for (const auto& m : modes) grid_mode_from_string(m);
  }
};

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const Json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace detail

inline ExperimentSpec spec_from_json(const Json& j) {
  try {
    ExperimentSpec s;
    detail::reject_unknown(j, {"instance", "objective", "strategy", "trials", "master_seed", "output"},
                           "spec");
    const auto& ij = j.at("instance");
    detail::reject_unknown(ij, {"file", "generator", "params", "count"}, "spec.instance");
    if (ij.contains("file")) s.instance.file = ij.at("file").get<std::string>();
    if (ij.contains("generator")) s.instance.generator = ij.at("generator").get<std::string>();
    if (!s.instance.file && s.instance.generator.empty())
      throw StructuralError("spec.instance needs a file or a generator");
    if (ij.contains("params")) {
      for (auto it = ij.at("params").begin(); it != ij.at("params").end(); ++it)
        s.instance.params[it.key()] =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    if (ij.contains("count")) s.instance.count = ij.at("count").get<size_t>();
    if (j.contains("objective")) {
      const auto& oj = j.at("objective");
      detail::reject_unknown(oj, {"c_minus", "c_plus", "p", "distribution", "from_file"},
                             "spec.objective");
      if (oj.contains("c_minus")) s.objective.c_minus = oj.at("c_minus").get<int64_t>();
      if (oj.contains("c_plus")) s.objective.c_plus = oj.at("c_plus").get<int64_t>();
      if (oj.contains("p")) s.objective.p = oj.at("p").get<double>();
      if (oj.contains("distribution"))
        s.objective.distribution = oj.at("distribution").get<std::string>();
      if (oj.contains("from_file")) s.objective.from_file = oj.at("from_file").get<bool>();
    }
    if (j.contains("strategy")) {
      const auto& sj = j.at("strategy");
      detail::reject_unknown(sj, {"modes", "epsilon", "epsilon_prime", "delta", "T",
                                  "logM_constant", "derandomize_integral"},
                             "spec.strategy");
      if (sj.contains("modes")) s.modes = detail::scalar_or_list<std::string>(sj.at("modes"));
      if (sj.contains("epsilon")) s.epsilon = detail::scalar_or_list<double>(sj.at("epsilon"));
      if (sj.contains("epsilon_prime"))
        s.epsilon_prime = detail::scalar_or_list<double>(sj.at("epsilon_prime"));
      if (sj.contains("delta")) s.delta = detail::scalar_or_list<double>(sj.at("delta"));
      if (sj.contains("T")) s.T = detail::scalar_or_list<int64_t>(sj.at("T"));
      if (sj.contains("logM_constant"))
        s.logM_constant = detail::scalar_or_list<double>(sj.at("logM_constant"));
      if (sj.contains("derandomize_integral"))
        s.derandomize_integral = sj.at("derandomize_integral").get<bool>();
    }
    if (j.contains("trials")) s.trials = j.at("trials").get<size_t>();
    if (j.contains("master_seed")) s.master_seed = j.at("master_seed").get<uint64_t>();
    if (j.contains("output")) {
      const auto& oj = j.at("output");
      detail::reject_unknown(oj, {"csv", "summary"}, "spec.output");
      if (oj.contains("csv")) s.csv_path = oj.at("csv").get<std::string>();
      if (oj.contains("summary")) s.summary_path = oj.at("summary").get<std::string>();
    }
    s.check();
    return s;
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed experiment spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw StructuralError(std::string("invalid experiment spec: ") + e.what());
  }
}

inline ExperimentSpec load_spec(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw StructuralError(std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

struct MetricsRow {
  size_t instance_id = 0;
  std::string family;
  std::string mode;
  double epsilon = 0, epsilon_prime = 0, delta = 0, p = 0, logM_constant = 1;
  int64_t T = 0;
  size_t trial = 0;
  uint64_t nature_seed = 0, strategy_seed = 0;
  size_t queries_total = 0;
  int64_t queries_per_row_max = 0;
  int64_t value = 0;
  double pessimistic_lp = 0, omniscient_lp = 0;
  std::optional<int64_t> omniscient_ip;
  double ratio_lp = 0;
  std::optional<double> ratio_ip;
  bool success = false;
  std::string error;
};

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_header() {
  return "schema_version,instance_id,family,mode,epsilon,epsilon_prime,delta,p,logM_constant,T,"
         "trial,nature_seed,strategy_seed,queries_total,queries_per_row_max,value,pessimistic_lp,"
         "omniscient_lp,omniscient_ip,ratio_lp,ratio_ip,success,error";
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string to_csv_line(const MetricsRow& r) {
  std::ostringstream os;
  os << kCsvSchemaVersion << ',' << r.instance_id << ',' << r.family << ',' << r.mode << ','
     << format_double(r.epsilon) << ',' << format_double(r.epsilon_prime) << ','
     << format_double(r.delta) << ',' << format_double(r.p) << ','
     << format_double(r.logM_constant) << ',' << r.T << ',' << r.trial << ',' << r.nature_seed
     << ',' << r.strategy_seed << ',' << r.queries_total << ',' << r.queries_per_row_max << ','
     << r.value << ',' << format_double(r.pessimistic_lp) << ','
     << format_double(r.omniscient_lp) << ','
     << (r.omniscient_ip ? std::to_string(*r.omniscient_ip) : "") << ','
     << format_double(r.ratio_lp) << ',' << (r.ratio_ip ? format_double(*r.ratio_ip) : "")
     << ',' << (r.success ? 1 : 0) << ',' << csv_escape(r.error);
  return os.str();
}

/// Wilson score interval for k successes in n trials at z = 1.96.
inline std::pair<double, double> wilson_interval(size_t k, size_t n, double z = 1.96) {
  if (n == 0) return {0.0, 1.0};
  double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn;
  double denom = 1 + z * z / nn;
  double center = (ph + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Worker count from STOCHPACK_WORKERS, default 1.
inline size_t worker_count_from_env() {
  const char* v = std::getenv("STOCHPACK_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw std::invalid_argument("STOCHPACK_WORKERS must be a positive integer");
  return static_cast<size_t>(n);
}

/// Runs `fn(i)` for i in [0, count) on `workers` threads. Each index is
/// handled exactly once; results must be written to slot i by the caller.
template <class Fn>
void parallel_for(size_t count, size_t workers, Fn&& fn) {
  workers = std::max<size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct PreparedInstance {
  PackingInstance instance;
  StochasticObjective objective;
  std::shared_ptr<const ProblemAdapter> adapter;
};

struct GridPoint {
  GridMode mode;
  double epsilon = 0, epsilon_prime = 0, delta = 0, logM_constant = 1;
  std::optional<int64_t> T;  // empty: recommended
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // sorted by (instance, grid point, trial)

  std::string csv() const {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv_line(r) + "\n";
    return out;
  }

  /// One line per (mode, epsilon, epsilon', delta, logM constant, T) over
  /// all instances and trials.
  std::string summary() const;
};

inline std::string ExperimentResult::summary() const {
  using Key = std::tuple<std::string, double, double, double, double, int64_t>;
  struct Acc {
    size_t n = 0, ok = 0, errors = 0;
    double ratio = 0, queries = 0, row_max = 0;
  };
  std::map<Key, Acc> acc;
  for (const auto& r : rows) {
    auto& a = acc[{r.mode, r.epsilon, r.epsilon_prime, r.delta, r.logM_constant, r.T}];
    ++a.n;
    if (!r.error.empty()) {
      ++a.errors;
      continue;
    }
    a.ok += r.success;
    a.ratio += r.ratio_lp;
    a.queries += static_cast<double>(r.queries_total);
    a.row_max += static_cast<double>(r.queries_per_row_max);
  }
  std::ostringstream os;
  os << "mode eps eps' delta logM_c T trials success_rate wilson95_lo wilson95_hi mean_ratio_lp "
        "mean_queries mean_row_queries_max errors\n";
  for (const auto& [k, a] : acc) {
    auto [lo, hi] = wilson_interval(a.ok, a.n);
    double valid = static_cast<double>(std::max<size_t>(1, a.n - a.errors));
    os << std::get<0>(k) << ' ' << format_double(std::get<1>(k)) << ' '
       << format_double(std::get<2>(k)) << ' ' << format_double(std::get<3>(k)) << ' '
       << format_double(std::get<4>(k)) << ' ' << std::get<5>(k) << ' ' << a.n << ' '
       << format_double(static_cast<double>(a.ok) / static_cast<double>(a.n)) << ' '
       << format_double(lo) << ' ' << format_double(hi) << ' ' << format_double(a.ratio / valid)
       << ' ' << format_double(a.queries / valid) << ' ' << format_double(a.row_max / valid)
       << ' ' << a.errors << "\n";
  }
  return os.str();
}

inline std::vector<PreparedInstance> prepare_instances(const ExperimentSpec& spec) {
  std::vector<PreparedInstance> out;
  const size_t count = spec.instance.file ? 1 : spec.instance.count;
  for (size_t id = 0; id < count; ++id) {
    PreparedInstance p;
    std::optional<StochasticObjective> stored;
    if (spec.instance.file) {
      auto file = load_instance(*spec.instance.file);
      auto report = validate_instance(file.instance);
      if (!report.ok())
        throw StructuralError("instance file fails validation: " + report.violations.front().detail);
      p.instance = std::move(file.instance);
      stored = std::move(file.objective);
    } else {
      p.instance = generate(spec.instance.generator, spec.instance.params,
                            derive_seed(spec.master_seed, id, 0, Stream::kInstance));
    }
    if (spec.objective.from_file) {
      if (!stored) throw StructuralError("spec asks for the file objective but none is stored");
      p.objective = *stored;
    } else {
      p.objective = StochasticObjective::uniform(p.instance.m, spec.objective.c_minus,
                                                 spec.objective.c_plus, spec.objective.p);
    }
    p.adapter = make_adapter(p.instance);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  std::vector<std::optional<int64_t>> Ts;
  if (spec.T.empty()) Ts.push_back(std::nullopt);
  for (int64_t t : spec.T) Ts.push_back(t);
  for (const auto& m : spec.modes)
    for (double eps : spec.epsilon) {
      std::vector<double> eps_primes = spec.epsilon_prime ? *spec.epsilon_prime : std::vector<double>{eps};
      for (double epsp : eps_primes)
        for (double delta : spec.delta)
          for (double c : spec.logM_constant)
            for (const auto& t : Ts) grid.push_back({grid_mode_from_string(m), eps, epsp, delta, c, t});
    }
  return grid;
}

inline ItemDistribution distribution_named(const std::string& name) {
  if (name == "two_point") return two_point;
  if (name == "upper_or_uniform") return upper_or_uniform;
  throw StructuralError("unknown distribution '" + name + "'");
}

/// One trial of one grid point; failures are recorded in the row.
inline MetricsRow run_trial(const PreparedInstance& prep, size_t instance_id, const GridPoint& g,
                            size_t trial, const ExperimentSpec& spec) {
  MetricsRow row;
  row.instance_id = instance_id;
  row.family = to_string(prep.instance.family);
  row.mode = g.mode.name();
  row.epsilon = g.epsilon;
  row.epsilon_prime = g.epsilon_prime;
  row.delta = g.delta;
  row.p = prep.objective.p();
  row.logM_constant = g.logM_constant;
  row.trial = trial;
  row.nature_seed = derive_seed(spec.master_seed, instance_id, trial, Stream::kNature);
  row.strategy_seed = derive_seed(spec.master_seed, instance_id, trial, Stream::kStrategy);
  try {
    auto dist = distribution_named(spec.objective.distribution);
    auto realization = sample_realization(prep.objective, row.nature_seed, dist);
    StrategyConfig cfg;
    cfg.epsilon = g.epsilon;
    cfg.epsilon_prime = g.epsilon_prime;
    cfg.delta = g.delta;
    cfg.strategy_seed = row.strategy_seed;
    cfg.derandomize_integral = spec.derandomize_integral;
    cfg.T = g.T ? *g.T
                : recommended_T(prep.instance, *prep.adapter, prep.objective, g.epsilon,
                                g.epsilon_prime, g.delta, g.logM_constant);
    row.T = cfg.T;
    QueryOracle oracle(prep.instance, realization);
    RunResult res;
    Mode threshold_mode = Mode::kAdaptive;
    if (!g.mode.baseline) {
      cfg.mode = g.mode.mode;
      threshold_mode = cfg.mode;
      res = run_strategy(prep.instance, prep.objective, oracle, *prep.adapter, cfg);
    } else {
      double budget = 0.0;
      if (g.mode.baseline_kind == BaselineKind::kUniformRandom) {
        // Match the adaptive strategy's reveals on the same trial.
        QueryOracle shadow(prep.instance, realization);
        cfg.mode = Mode::kAdaptive;
        RunOptions quick;
        quick.compute_omniscient_ip = false;
        budget = static_cast<double>(
            run_adaptive(prep.instance, prep.objective, shadow, *prep.adapter, cfg, quick)
                .queries_total);
      }
      res = run_baseline(prep.instance, prep.objective, oracle, *prep.adapter,
                         g.mode.baseline_kind, budget, row.strategy_seed);
    }
    row.queries_total = res.queries_total;
    row.queries_per_row_max =
        res.row_queries.empty() ? 0 : *std::max_element(res.row_queries.begin(), res.row_queries.end());
    row.value = res.value;
    row.pessimistic_lp = res.pessimistic_lp;
    row.omniscient_lp = res.omniscient_lp;
    row.omniscient_ip = res.omniscient_ip;
    row.ratio_lp = res.ratio_lp;
    row.ratio_ip = res.ratio_ip;
    row.success = is_success(threshold_mode, g.epsilon, res);
  } catch (const std::exception& e) {
    row.error = e.what();
    row.success = false;
  }
  return row;
}

/// Every (instance, grid point, trial) triple. Seeds depend only on the
/// master seed, instance id and trial index, so the CSV is identical for
/// any worker count.
inline ExperimentResult run_experiment(const ExperimentSpec& spec,
                                       std::optional<size_t> workers = std::nullopt) {
  spec.check();
  auto instances = prepare_instances(spec);
  auto grid = expand_grid(spec);
  const size_t per_instance = grid.size() * spec.trials;
  const size_t total = instances.size() * per_instance;
  ExperimentResult result;
  result.rows.resize(total);
  parallel_for(total, workers ? *workers : worker_count_from_env(), [&](size_t idx) {
    size_t inst = idx / per_instance;
    size_t rest = idx % per_instance;
    size_t gp = rest / spec.trials;
    size_t trial = rest % spec.trials;
    result.rows[idx] = run_trial(instances[inst], inst, grid[gp], trial, spec);
  });
  return result;
}

/// run_experiment restricted to explicit T values (no recommended T).
inline ExperimentResult sweep_T(const ExperimentSpec& spec,
                                std::optional<size_t> workers = std::nullopt) {
  if (spec.T.empty()) throw StructuralError("sweep needs an explicit T grid");
  return run_experiment(spec, workers);
}

}  // namespace stochpack
