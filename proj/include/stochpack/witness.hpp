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

// Witness-cover laboratory: enumeration of dual grid vectors, the cover
// property check, and infeasibility tracking along strategy runs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochpack/common.hpp"
#include "stochpack/lp.hpp"
#include "stochpack/random.hpp"
#include "stochpack/strategies.hpp"

namespace stochpack {

enum class WitnessKind { kTdiInteger, kSparseGrid };

inline std::string to_string(WitnessKind kind) {
  return kind == WitnessKind::kTdiInteger ? "tdi-integer" : "sparse-grid";
}

inline constexpr size_t kMaxTdiRows = 12;
inline constexpr int64_t kMaxTdiMu = 8;
inline constexpr size_t kMaxSparseRows = 10;
inline constexpr size_t kMaxCoverSize = 2000000;

/// Members are stored as integer unit counts u; the dual vector is
/// y_i = u_i * step[i]. `scaled` holds the same vectors as integers over
/// the common denominator `denominator`.
struct WitnessCover {
  WitnessKind kind = WitnessKind::kTdiInteger;
  std::vector<int64_t> b;
  Rational mu;
  Rational epsilon;
  Rational epsilon_prime;  // cap = (1 - epsilon_prime) mu
  Rational gamma;          // sparse grid only
  Rational cap;
  std::vector<Rational> step;
  size_t support_limit = 0;
  std::vector<std::vector<int64_t>> members;
  int64_t denominator = 1;
  std::vector<std::vector<int64_t>> scaled;

  size_t size() const { return members.size(); }

  std::vector<Rational> vector_of(size_t idx) const {
    std::vector<Rational> y(b.size());
    for (size_t i = 0; i < b.size(); ++i) y[i] = Rational(members[idx][i]) * step[i];
    return y;
  }

  Rational objective_of(size_t idx) const {
    Rational v = 0;
    for (size_t i = 0; i < b.size(); ++i) v += Rational(members[idx][i]) * step[i] * b[i];
    return v;
  }

  /// Reference size exp(3 mu ln(1 + n / mu)), for plotting only.
  double size_bound_for_plotting() const {
    double m = to_double(mu), n = static_cast<double>(b.size());
    if (m <= 0) return 1.0;
    return std::exp(3.0 * m * std::log(1.0 + n / m));
  }
};

/// A budgeted enumeration problem: all u in Z_+^n with sum_i w_i u_i <=
/// budget and |supp(u)| <= support_limit.
struct GridProblem {
  std::vector<int64_t> weight;
  int64_t budget = 0;
  size_t support_limit = 0;
};

/// Depth-first enumeration, coordinates in index order.
inline std::vector<std::vector<int64_t>> enumerate_recursive(const GridProblem& g,
                                                             size_t limit = kMaxCoverSize) {
  const size_t n = g.weight.size();
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> u(n, 0);
  std::function<void(size_t, int64_t, size_t)> rec = [&](size_t i, int64_t left, size_t supp) {
    if (i == n) {
      if (out.size() >= limit) throw SizeLimitError("witness cover exceeds the member limit");
      out.push_back(u);
      return;
    }
    for (int64_t v = 0;; ++v) {
      if (v > 0 && (v * g.weight[i] > left || supp + 1 > g.support_limit)) break;
      u[i] = v;
      rec(i + 1, left - v * g.weight[i], supp + (v > 0));
    }
    u[i] = 0;
  };
  if (g.budget >= 0) rec(0, g.budget, 0);
  return out;
}

/// Odometer enumeration: increment the last coordinate, on overflow reset
/// it and carry left. The feasible set is downward closed, so this visits
/// the same set in lexicographic order.
inline std::vector<std::vector<int64_t>> enumerate_iterative(const GridProblem& g,
                                                             size_t limit = kMaxCoverSize) {
  const size_t n = g.weight.size();
  std::vector<std::vector<int64_t>> out;
  if (g.budget < 0) return out;
  std::vector<int64_t> u(n, 0);
  int64_t cost = 0;
  size_t supp = 0;
  out.push_back(u);
  while (true) {
    size_t i = n;
    bool advanced = false;
    while (i-- > 0) {
      int64_t new_cost = cost + g.weight[i];
      size_t new_supp = supp + (u[i] == 0);
      if (new_cost <= g.budget && new_supp <= g.support_limit) {
        ++u[i];
        cost = new_cost;
        supp = new_supp;
        advanced = true;
        break;
      }
      cost -= u[i] * g.weight[i];
      if (u[i] > 0) --supp;
      u[i] = 0;
    }
    if (!advanced) break;
    if (out.size() >= limit) throw SizeLimitError("witness cover exceeds the member limit");
    out.push_back(u);
  }
  return out;
}

enum class Enumerator { kRecursive, kIterative };

namespace detail {

inline void fill_scaled(WitnessCover& cover) {
  // Common denominator of the step sizes.
  boost::multiprecision::cpp_int den = 1;
  for (const auto& s : cover.step) {
    auto d = boost::multiprecision::denominator(s);
    den = den / boost::multiprecision::gcd(den, d) * d;
  }
  cover.denominator = den.convert_to<int64_t>();
  std::vector<int64_t> factor(cover.step.size());
  for (size_t i = 0; i < cover.step.size(); ++i) {
    Rational f = cover.step[i] * Rational(den);
    factor[i] = boost::multiprecision::numerator(f).convert_to<int64_t>();
  }
  cover.scaled.clear();
  for (const auto& u : cover.members) {
    std::vector<int64_t> s(u.size());
    for (size_t i = 0; i < u.size(); ++i) s[i] = u[i] * factor[i];
    cover.scaled.push_back(std::move(s));
  }
}

inline int64_t floor_to_int(const Rational& r) {
  return floor_rational(r).convert_to<int64_t>();
}

inline void check_common(const std::vector<int64_t>& b, const Rational& mu, const Rational& eps) {
  for (int64_t v : b)
    if (v < 1) throw std::invalid_argument("b must be positive");
  if (mu < 0) throw std::invalid_argument("mu must be nonnegative");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
}

}  // namespace detail

/// All integer y >= 0 with y.b <= (1 - eps) mu. Guarded to n <= 12 and
/// mu <= 8.
inline WitnessCover enumerate_tdi_cover(const std::vector<int64_t>& b, const Rational& mu,
                                        const Rational& epsilon,
                                        Enumerator how = Enumerator::kRecursive) {
  detail::check_common(b, mu, epsilon);
  if (b.size() > kMaxTdiRows)
    throw SizeLimitError("TDI cover refuses n = " + std::to_string(b.size()) + " > " +
                         std::to_string(kMaxTdiRows));
  if (mu > kMaxTdiMu) throw SizeLimitError("TDI cover refuses mu > " + std::to_string(kMaxTdiMu));
  WitnessCover cover;
  cover.kind = WitnessKind::kTdiInteger;
  cover.b = b;
  cover.mu = mu;
  cover.epsilon = epsilon;
  cover.epsilon_prime = epsilon;
  cover.cap = (1 - epsilon) * mu;
  cover.step.assign(b.size(), Rational(1));
  cover.support_limit = b.size();
  GridProblem g{b, detail::floor_to_int(cover.cap), b.size()};
  cover.members = how == Enumerator::kRecursive ? enumerate_recursive(g) : enumerate_iterative(g);
  detail::fill_scaled(cover);
  return cover;
}

/// All y in prod_i (eps / (2 b_i gamma)) Z_+ with y.b <= (1 - eps/2) mu and
/// |supp(y)| <= gamma mu. Guarded to n <= 10 and kMaxCoverSize members.
inline WitnessCover enumerate_sparse_cover(const std::vector<int64_t>& b, const Rational& mu,
                                           const Rational& epsilon, const Rational& gamma,
                                           Enumerator how = Enumerator::kRecursive) {
  detail::check_common(b, mu, epsilon);
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if (b.size() > kMaxSparseRows)
    throw SizeLimitError("sparse cover refuses n = " + std::to_string(b.size()) + " > " +
                         std::to_string(kMaxSparseRows));
  WitnessCover cover;
  cover.kind = WitnessKind::kSparseGrid;
  cover.b = b;
  cover.mu = mu;
  cover.epsilon = epsilon;
  cover.epsilon_prime = epsilon / 2;
  cover.gamma = gamma;
  cover.cap = (1 - epsilon / 2) * mu;
  for (int64_t bi : b) cover.step.push_back(epsilon / (2 * Rational(bi) * gamma));
  cover.support_limit = static_cast<size_t>(detail::floor_to_int(gamma * mu));
  // Each unit on row i costs step_i b_i = eps / (2 gamma), the same for
  // every row.
  Rational unit = epsilon / (2 * gamma);
  GridProblem g{std::vector<int64_t>(b.size(), 1), detail::floor_to_int(cover.cap / unit),
                cover.support_limit};
  cover.members = how == Enumerator::kRecursive ? enumerate_recursive(g) : enumerate_iterative(g);
  detail::fill_scaled(cover);
  return cover;
}

/// The grid point that dominates y: each entry rounded up to its grid
/// step. Used to exhibit cover members for arbitrary sparse duals.
inline std::vector<Rational> round_up_to_grid(const std::vector<Rational>& y,
                                              const std::vector<Rational>& step) {
  std::vector<Rational> out(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    Rational q = y[i] / step[i];
    Rational f = floor_rational(q);
    out[i] = (f == q ? f : f + 1) * step[i];
  }
  return out;
}

/// y^T A >= c with y given over a common denominator.
inline bool dual_feasible_scaled(std::span<const int64_t> scaled, int64_t denominator,
                                 const Matrix<int64_t>& A, std::span<const int64_t> c) {
  for (size_t j = 0; j < A.cols(); ++j) {
    int64_t lhs = 0;
    for (size_t i = 0; i < A.rows(); ++i) lhs += scaled[i] * A(i, j);
    if (lhs < c[j] * denominator) return false;
  }
  return true;
}

inline bool dual_feasible(const std::vector<Rational>& y, const Matrix<int64_t>& A,
                          std::span<const int64_t> c) {
  for (size_t j = 0; j < A.cols(); ++j) {
    Rational lhs = 0;
    for (size_t i = 0; i < A.rows(); ++i) lhs += y[i] * A(i, j);
    if (lhs < c[j]) return false;
  }
  return true;
}

struct CoverPropertyReport {
  bool holds = true;
  bool vacuous = false;                    // some member is feasible
  std::optional<size_t> feasible_member;
  std::optional<Rational> dual_optimum;    // min y.b s.t. y^T A >= c
  Rational threshold;                      // (1 - eps) mu
  std::optional<Rational> margin;          // dual_optimum - threshold
  std::vector<Rational> counterexample;    // set when the property fails
  std::string message;
};

/// If every member violates y^T A >= c, the cheapest dual-feasible y must
/// cost more than (1 - eps) mu. Checked by solving that LP exactly.
inline CoverPropertyReport verify_cover_property(const WitnessCover& cover,
                                                 const Matrix<int64_t>& A,
                                                 std::span<const int64_t> c_pessimistic) {
  if (A.rows() != cover.b.size() || A.cols() != c_pessimistic.size())
    throw StructuralError("cover, matrix and objective dimensions disagree");
  CoverPropertyReport rep;
  rep.threshold = (1 - cover.epsilon) * cover.mu;
  for (size_t k = 0; k < cover.size(); ++k) {
    if (dual_feasible_scaled(cover.scaled[k], cover.denominator, A, c_pessimistic)) {
      rep.vacuous = true;
      rep.feasible_member = k;
      rep.message = "member " + std::to_string(k) + " is feasible; property holds vacuously";
      return rep;
    }
  }
  auto lp = LpProblem::make(A, cover.b, c_pessimistic);
  auto dual = solve_dual_explicit<Rational>(lp);
  rep.dual_optimum = dual.value;
  rep.margin = dual.value - rep.threshold;
  rep.holds = dual.value > rep.threshold;
  if (!rep.holds) {
    rep.counterexample = dual.y;
    rep.message = "dual solution of value " + to_string(dual.value) +
                  " <= (1 - eps) mu = " + to_string(rep.threshold) + " escapes the cover";
  } else {
    rep.message = "all members infeasible; dual optimum " + to_string(dual.value) + " > " +
                  to_string(rep.threshold);
  }
  return rep;
}

/// Random integer vectors with y.b <= floor(cap), drawn from `rng`; a
/// sample of a TDI cover when full enumeration is out of reach. The zero
/// vector is always first.
inline std::vector<std::vector<int64_t>> sample_integer_members(const std::vector<int64_t>& b,
                                                                const Rational& cap,
                                                                size_t count, Rng& rng) {
  std::vector<std::vector<int64_t>> out;
  const int64_t budget = detail::floor_to_int(cap);
  if (budget < 0 || b.empty()) return out;
  out.emplace_back(b.size(), 0);
  while (out.size() < count) {
    std::vector<int64_t> y(b.size(), 0);
    int64_t left = budget;
    auto steps = rng.below(static_cast<uint64_t>(budget) + 1);
    for (uint64_t s = 0; s < steps; ++s) {
      size_t i = rng.below(b.size());
      if (b[i] <= left) {
        ++y[i];
        left -= b[i];
      }
    }
    out.push_back(std::move(y));
  }
  return out;
}

/// Feasibility of a fixed set of dual vectors against the pessimistic
/// vector, observed after every round of a run.
class WitnessTracker {
 public:
  WitnessTracker(Matrix<int64_t> A, std::vector<std::vector<int64_t>> scaled,
                 int64_t denominator = 1)
      : A_(std::move(A)), scaled_(std::move(scaled)), denominator_(denominator) {}

  static WitnessTracker for_cover(const Matrix<int64_t>& A, const WitnessCover& cover) {
    return WitnessTracker(A, cover.scaled, cover.denominator);
  }

  void observe(int64_t t, std::span<const int64_t> pessimistic) {
    std::vector<uint8_t> row(scaled_.size());
    for (size_t k = 0; k < scaled_.size(); ++k)
      row[k] = dual_feasible_scaled(scaled_[k], denominator_, A_, pessimistic);
    if (!rows_.empty()) {
      for (size_t k = 0; k < row.size(); ++k)
        if (row[k] && !rows_.back()[k]) ++violations_;
    }
    steps_.push_back(t);
    rows_.push_back(std::move(row));
  }

  PessimisticObserver observer() {
    return [this](int64_t t, std::span<const int64_t> v) { observe(t, v); };
  }

  size_t members() const { return scaled_.size(); }
  /// rows()[s][k]: member k feasible at observation s.
  const std::vector<std::vector<uint8_t>>& rows() const { return rows_; }
  const std::vector<int64_t>& steps() const { return steps_; }
  /// Number of infeasible -> feasible transitions seen.
  size_t monotonicity_violations() const { return violations_; }

  bool any_feasible_at(size_t s) const {
    return std::any_of(rows_[s].begin(), rows_[s].end(), [](uint8_t v) { return v != 0; });
  }

  void dump(std::ostream& os) const {
    os << "step";
    for (size_t k = 0; k < scaled_.size(); ++k) os << ",y" << k;
    os << "\n";
    for (size_t s = 0; s < rows_.size(); ++s) {
      os << steps_[s];
      for (uint8_t v : rows_[s]) os << ',' << static_cast<int>(v);
      os << "\n";
    }
  }

 private:
  Matrix<int64_t> A_;
  std::vector<std::vector<int64_t>> scaled_;
  int64_t denominator_;
  std::vector<std::vector<uint8_t>> rows_;
  std::vector<int64_t> steps_;
  size_t violations_ = 0;
};

/// Runs `run` with a tracker attached and returns it.
inline WitnessTracker witness_dynamics(const Matrix<int64_t>& A, const WitnessCover& cover,
                                       const std::function<void(PessimisticObserver)>& run) {
  auto tracker = WitnessTracker::for_cover(A, cover);
  run(tracker.observer());
  return tracker;
}

/// Survival frequencies of one group of runs sharing mu_tilde: entry t is
/// the fraction of (run, member) pairs still feasible after t rounds.
struct SurvivalCurve {
  double mu_tilde = 0;
  double epsilon_prime = 0;
  double p = 1;
  double delta_c = 1;
  std::vector<size_t> survived;  // per t
  std::vector<size_t> total;     // per t

  void add(const WitnessTracker& tracker) {
    const auto& rows = tracker.rows();
    if (survived.size() < rows.size()) {
      survived.resize(rows.size(), 0);
      total.resize(rows.size(), 0);
    }
    for (size_t s = 0; s < rows.size(); ++s) {
      for (uint8_t v : rows[s]) survived[s] += v;
      total[s] += rows[s].size();
    }
  }

  double frequency(size_t t) const {
    return total[t] == 0 ? 0.0 : static_cast<double>(survived[t]) / static_cast<double>(total[t]);
  }

  /// exp(-eps' p mu t / delta_c).
  double bound(size_t t) const {
    if (delta_c <= 0) return t == 0 ? 1.0 : 0.0;
    return std::exp(-epsilon_prime * p * mu_tilde * static_cast<double>(t) / delta_c);
  }

  void write_csv(std::ostream& os, bool header = true) const {
    if (header) os << "mu_tilde,t,survived,total,frequency,bound\n";
    for (size_t t = 0; t < survived.size(); ++t)
      os << mu_tilde << ',' << t << ',' << survived[t] << ',' << total[t] << ','
         << frequency(t) << ',' << bound(t) << "\n";
  }
};

}  // namespace stochpack
