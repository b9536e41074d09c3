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
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochpack/adapters.hpp"
#include "stochpack/instance.hpp"
#include "stochpack/random.hpp"

namespace stochpack {

enum class Mode { kAdaptive, kNonadaptive };

inline std::string to_string(Mode mode) {
  return mode == Mode::kAdaptive ? "adaptive" : "nonadaptive";
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "adaptive") return Mode::kAdaptive;
  if (s == "nonadaptive" || s == "non-adaptive") return Mode::kNonadaptive;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

/// T = ceil((delta_c / (eps' p)) (logM + ln(1/delta))), never below 1.
/// logM = 0 is accepted; a negative logM is rejected.
inline int64_t iteration_bound(double delta_c, double epsilon_prime, double p, double logM,
                               double delta) {
  if (!(delta_c >= 0.0)) throw std::invalid_argument("delta_c must be nonnegative");
  if (!(epsilon_prime > 0.0)) throw std::invalid_argument("epsilon_prime must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (!(logM >= 0.0)) throw std::invalid_argument("logM must be nonnegative");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  double raw = delta_c / (epsilon_prime * p) * (logM + std::log(1.0 / delta));
  // Absorb rounding noise so that exact integers do not round up.
  auto t = static_cast<int64_t>(std::ceil(raw - 1e-9));
  return std::max<int64_t>(t, 1);
}

/// Per-family default for the log term, before the constant multiplier:
/// ln(1 + n) in general and k ln n + 1/eps for hypergraph-like families.
inline double default_logM(const PackingInstance& inst, double epsilon) {
  double n = static_cast<double>(std::max<size_t>(inst.n, 1));
  switch (inst.family) {
    case Family::kKHypergraph:
    case Family::kKCspip: {
      double k = static_cast<double>(std::max<size_t>(inst.meta.k, 1));
      return k * std::log(n) + 1.0 / epsilon;
    }
    default:
      return std::log(1.0 + n);
  }
}

/// Iteration count for an instance: the bound above with the family log
/// term times `constant`, multiplied by the sampling scale w.
inline int64_t recommended_T(const PackingInstance& inst, const ProblemAdapter& adapter,
                             const StochasticObjective& obj, double epsilon,
                             double epsilon_prime, double delta, double constant = 1.0) {
  double logM = constant * default_logM(inst, epsilon);
  int64_t t = iteration_bound(static_cast<double>(obj.delta_c()), epsilon_prime, obj.p(), logM,
                              delta);
  double w = adapter.scale_w();
  if (w > 1.0) t = static_cast<int64_t>(std::ceil(static_cast<double>(t) * w - 1e-9));
  return t;
}

struct StrategyConfig {
  Mode mode = Mode::kAdaptive;
  int64_t T = 1;
  double epsilon = 0.2;
  double epsilon_prime = 0.2;
  double delta = 0.2;
  uint64_t strategy_seed = 1;
  bool derandomize_integral = false;

  void check() const {
    if (T < 1) throw std::invalid_argument("T must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (!(epsilon_prime > 0.0 && epsilon_prime <= epsilon))
      throw std::invalid_argument("epsilon_prime must lie in (0, epsilon]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  }
};

struct IterationRecord {
  int64_t t = 0;                 // 1-based round
  double optimistic_value = 0;   // LP value solved at the start of the round
  double pessimistic_value = 0;  // LP value after the round's reveals
  std::vector<size_t> items;     // queried (adaptive) or newly supposed (non-adaptive)
  size_t cumulative = 0;         // reveals so far, or supposed so far
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  std::optional<double> mu_prime;  // non-adaptive: smallest optimistic value
};

struct RunResult {
  std::vector<uint8_t> x;
  int64_t value = 0;  // realization . x
  double pessimistic_lp = 0;
  double omniscient_lp = 0;
  std::optional<int64_t> omniscient_ip;
  double ratio_lp = 0;
  std::optional<double> ratio_ip;
  size_t queries_total = 0;
  std::vector<int64_t> row_queries;
  RunTrace trace;
};

/// Called with t = 0 before the first round and with t after round t. The
/// vector is the pessimistic vector the run's reveals imply; for the
/// non-adaptive strategy it is the lab view in which the supposed set is
/// already revealed.
using PessimisticObserver = std::function<void(int64_t t, std::span<const int64_t> pessimistic)>;

struct RunOptions {
  PessimisticObserver observer;
  bool compute_omniscient_ip = true;
};

namespace detail {

inline double lp_value(const ProblemAdapter& adapter, std::span<const int64_t> weights) {
  return adapter.solve_relaxation(weights).value;
}

inline bool is_integral(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) {
    return std::abs(v) <= 1e-9 || std::abs(v - 1.0) <= 1e-9;
  });
}

template <class F>
auto with_iteration(int64_t t, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SizeLimitError& e) {
    throw SizeLimitError("iteration " + std::to_string(t) + ": " + e.what());
  } catch (const std::exception& e) {
    throw SolverError("iteration " + std::to_string(t) + ": " + e.what());
  }
}

inline void finish(RunResult& res, const PackingInstance& inst, const StochasticObjective& obj,
                   const QueryOracle& oracle, const ProblemAdapter& adapter,
                   const RunOptions& opts) {
  auto pess = pessimistic_vector(oracle, obj);
  auto rounded = with_iteration(static_cast<int64_t>(res.trace.iterations.size()) + 1,
                                [&] { return adapter.round_integral(pess); });
  res.x = rounded.x;
  res.pessimistic_lp = lp_value(adapter, pess);
  const auto& real = oracle.hidden_realization().c;
  res.value = 0;
  for (size_t j = 0; j < inst.m; ++j)
    if (res.x[j]) res.value += real[j];
  for (size_t i = 0; i < inst.n; ++i) {
    int64_t lhs = 0;
    for (size_t j = 0; j < inst.m; ++j) lhs += inst.A(i, j) * res.x[j];
    if (lhs > inst.b[i]) throw SolverError("rounded solution violates row " + std::to_string(i));
  }
  res.omniscient_lp = lp_value(adapter, real);
  res.ratio_lp = res.omniscient_lp > 0 ? static_cast<double>(res.value) / res.omniscient_lp : 1.0;
  if (opts.compute_omniscient_ip) {
    res.omniscient_ip = adapter.omniscient_ip(real);
    res.ratio_ip = *res.omniscient_ip > 0
                       ? static_cast<double>(res.value) / static_cast<double>(*res.omniscient_ip)
                       : 1.0;
  }
  res.queries_total = oracle.total_queries();
  res.row_queries.assign(oracle.row_queries().begin(), oracle.row_queries().end());
}

}  // namespace detail

/// Each round solves the optimistic LP and queries item j with
/// probability x_j / w; the pessimistic problem is rounded at the end.
inline RunResult run_adaptive(const PackingInstance& inst, const StochasticObjective& obj,
                              QueryOracle& oracle, const ProblemAdapter& adapter,
                              const StrategyConfig& config, const RunOptions& opts = {}) {
  config.check();
  if (obj.size() != inst.m || oracle.size() != inst.m)
    throw StructuralError("objective, oracle and instance disagree on item count");
  Rng coins(config.strategy_seed);
  const double w = adapter.scale_w();
  RunResult res;
  if (opts.observer) opts.observer(0, pessimistic_vector(oracle, obj));
  for (int64_t t = 1; t <= config.T; ++t) {
    IterationRecord rec;
    rec.t = t;
    auto opt = optimistic_vector(oracle, obj);
    auto sol = detail::with_iteration(t, [&] { return adapter.solve_relaxation(opt); });
    rec.optimistic_value = sol.value;
    const bool exact = config.derandomize_integral && detail::is_integral(sol.x);
    for (size_t j = 0; j < inst.m; ++j) {
      // A coin is drawn for every item so the stream position never
      // depends on the relaxation.
      double u = coins.uniform01();
      double xj = std::clamp(sol.x[j], 0.0, 1.0);
      bool hit = exact ? xj > 0.5 : u < xj / w;
      if (hit) {
        if (!oracle.is_revealed(j)) rec.items.push_back(j);
        oracle.query(j);
      }
    }
    auto pess = pessimistic_vector(oracle, obj);
    rec.pessimistic_value = detail::with_iteration(t, [&] { return detail::lp_value(adapter, pess); });
    rec.cumulative = oracle.total_queries();
    res.trace.iterations.push_back(std::move(rec));
    if (opts.observer) opts.observer(t, pess);
  }
  detail::finish(res, inst, obj, oracle, adapter, opts);
  return res;
}

/// Each round solves the optimistic LP with supposed items at c_minus and
/// supposes item j with probability x_j / w. Only the supposed set is
/// revealed, in one batch, before rounding.
inline RunResult run_nonadaptive(const PackingInstance& inst, const StochasticObjective& obj,
                                 QueryOracle& oracle, const ProblemAdapter& adapter,
                                 const StrategyConfig& config, const RunOptions& opts = {}) {
  config.check();
  if (obj.size() != inst.m || oracle.size() != inst.m)
    throw StructuralError("objective, oracle and instance disagree on item count");
  Rng coins(config.strategy_seed);
  const double w = adapter.scale_w();
  const auto& real = oracle.hidden_realization().c;
  std::vector<uint8_t> supposed(inst.m, 0);
  size_t num_supposed = 0;
  auto lab_view = [&] {
    std::vector<int64_t> v(obj.c_minus().begin(), obj.c_minus().end());
    for (size_t j = 0; j < inst.m; ++j)
      if (supposed[j] || oracle.is_revealed(j)) v[j] = real[j];
    return v;
  };
  RunResult res;
  if (opts.observer) opts.observer(0, lab_view());
  for (int64_t t = 1; t <= config.T; ++t) {
    IterationRecord rec;
    rec.t = t;
    auto opt = optimistic_vector(oracle, obj);
    for (size_t j = 0; j < inst.m; ++j)
      if (supposed[j] && !oracle.is_revealed(j)) opt[j] = obj.c_minus()[j];
    auto sol = detail::with_iteration(t, [&] { return adapter.solve_relaxation(opt); });
    rec.optimistic_value = sol.value;
    res.trace.mu_prime = res.trace.mu_prime ? std::min(*res.trace.mu_prime, sol.value) : sol.value;
    const bool exact = config.derandomize_integral && detail::is_integral(sol.x);
    for (size_t j = 0; j < inst.m; ++j) {
      double u = coins.uniform01();
      double xj = std::clamp(sol.x[j], 0.0, 1.0);
      bool hit = exact ? xj > 0.5 : u < xj / w;
      if (hit && !supposed[j]) {
        supposed[j] = 1;
        ++num_supposed;
        rec.items.push_back(j);
      }
    }
    auto view = lab_view();
    rec.pessimistic_value = detail::with_iteration(t, [&] { return detail::lp_value(adapter, view); });
    rec.cumulative = num_supposed;
    res.trace.iterations.push_back(std::move(rec));
    if (opts.observer) opts.observer(t, view);
  }
  for (size_t j = 0; j < inst.m; ++j)
    if (supposed[j]) oracle.query(j);
  detail::finish(res, inst, obj, oracle, adapter, opts);
  return res;
}

inline RunResult run_strategy(const PackingInstance& inst, const StochasticObjective& obj,
                              QueryOracle& oracle, const ProblemAdapter& adapter,
                              const StrategyConfig& config, const RunOptions& opts = {}) {
  return config.mode == Mode::kAdaptive ? run_adaptive(inst, obj, oracle, adapter, config, opts)
                                        : run_nonadaptive(inst, obj, oracle, adapter, config, opts);
}

/// Success threshold of the mode: (1 - eps) for adaptive, (1 - eps)/2 for
/// non-adaptive, measured on the returned value against the omniscient LP.
inline double success_threshold(Mode mode, double epsilon) {
  return mode == Mode::kAdaptive ? 1.0 - epsilon : (1.0 - epsilon) / 2.0;
}

inline bool is_success(Mode mode, double epsilon, const RunResult& r) {
  return static_cast<double>(r.value) >=
         success_threshold(mode, epsilon) * r.omniscient_lp - kGapTol;
}

enum class BaselineKind { kOmniscient, kBlind, kUniformRandom };

inline std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kOmniscient: return "omniscient";
    case BaselineKind::kBlind: return "blind";
    case BaselineKind::kUniformRandom: return "uniform_random";
  }
  return "?";
}

/// omniscient reveals everything; blind reveals nothing; uniform_random
/// reveals each item with probability min(1, budget / m), so the expected
/// number of reveals matches `budget`.
inline RunResult run_baseline(const PackingInstance& inst, const StochasticObjective& obj,
                              QueryOracle& oracle, const ProblemAdapter& adapter,
                              BaselineKind kind, double budget = 0.0, uint64_t seed = 1,
                              const RunOptions& opts = {}) {
  RunResult res;
  switch (kind) {
    case BaselineKind::kOmniscient:
      for (size_t j = 0; j < inst.m; ++j) oracle.query(j);
      break;
    case BaselineKind::kBlind:
      break;
    case BaselineKind::kUniformRandom: {
      if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
      Rng coins(seed);
      double q = inst.m == 0 ? 0.0 : std::min(1.0, budget / static_cast<double>(inst.m));
      for (size_t j = 0; j < inst.m; ++j)
        if (coins.uniform01() < q) oracle.query(j);
      break;
    }
  }
  detail::finish(res, inst, obj, oracle, adapter, opts);
  return res;
}

}  // namespace stochpack
