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

// Dense simplex solvers for packing LPs
//
//   max c.x  s.t.  A x <= b,  0 <= x (<= 1 when explicit_unit_bounds)
//
// with A >= 0 and b >= 0, so the slack basis is always primal feasible and
// no phase one is needed. Both solvers are templated on the scalar type:
// `double` for speed, `Rational` for exact results. Pivoting follows the
// least-index rule for entering and leaving variables, which rules out
// cycling and makes every solve deterministic.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stochpack/common.hpp"
#include "stochpack/random.hpp"

namespace stochpack {

enum class Arithmetic { kRational, kFloat };

// Feasibility tolerance for float mode.
inline constexpr double kFeasTol = 1e-9;
// Duality-gap acceptance for float mode.
inline constexpr double kGapTol = 1e-6;

template <class Scalar>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr bool kExact = false;
  static bool positive(double v) { return v > kFeasTol; }
  static bool negative(double v) { return v < -kFeasTol; }
  static bool is_zero(double v) { return std::abs(v) <= kFeasTol; }
  static double from(const Rational& r) { return to_double(r); }
  static void clean(double& v) {
    if (std::abs(v) < 1e-13) v = 0.0;
  }
};

template <>
struct NumTraits<Rational> {
  static constexpr bool kExact = true;
  static bool positive(const Rational& v) { return v > 0; }
  static bool negative(const Rational& v) { return v < 0; }
  static bool is_zero(const Rational& v) { return v == 0; }
  static Rational from(const Rational& r) { return r; }
  static void clean(Rational&) {}
};

struct LpProblem {
  Matrix<int64_t> A;
  std::vector<int64_t> b;
  std::vector<Rational> objective;
  bool explicit_unit_bounds = false;

  size_t rows() const { return A.rows(); }
  size_t cols() const { return A.cols(); }

  static LpProblem make(Matrix<int64_t> A, std::vector<int64_t> b,
                        std::span<const int64_t> weights, bool explicit_unit_bounds = false) {
    LpProblem p{std::move(A), std::move(b), {}, explicit_unit_bounds};
    p.objective.reserve(weights.size());
    for (int64_t w : weights) p.objective.emplace_back(w);
    p.check();
    return p;
  }

  void check() const {
    if (b.size() != A.rows()) throw StructuralError("LP: b length != row count");
    if (objective.size() != A.cols()) throw StructuralError("LP: objective length != column count");
    for (int64_t v : b)
      if (v < 0) throw StructuralError("LP: negative right-hand side");
    for (size_t i = 0; i < A.rows(); ++i)
      for (size_t j = 0; j < A.cols(); ++j)
        if (A(i, j) < 0) throw StructuralError("LP: negative constraint coefficient");
    for (const auto& c : objective)
      if (c < 0) throw StructuralError("LP: negative objective coefficient");
  }
};

template <class Scalar>
struct LpSolution {
  std::vector<Scalar> x;
  Scalar value{};
  // Basic variable of each row: j < m is structural, m + i is the slack of row i.
  std::vector<int> basis;
  std::vector<uint8_t> at_upper;  // structural nonbasics sitting at 1
  bool is_vertex = true;
  int pivots = 0;
};

template <class Scalar>
struct DualSolution {
  std::vector<Scalar> y;
  // Multipliers of x_j <= 1; all zero unless explicit_unit_bounds.
  std::vector<Scalar> bound_duals;
  Scalar value{};
};

struct SolveOptions {
  // Float mode only: add a seeded perturbation of relative size `scale` to
  // the objective to pick a different optimal vertex. Reported values use
  // the unperturbed objective.
  std::optional<uint64_t> perturbation_seed;
  double perturbation_scale = 1e-7;
  int max_pivots = 0;  // 0 picks a size-based default
};

template <class Scalar>
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const LpProblem& prob, const SolveOptions& options = {})
      : n_(prob.rows()),
        m_(prob.cols()),
        cols_(m_ + n_),
        explicit_bounds_(prob.explicit_unit_bounds),
        tab_(n_ * cols_),
        beta_(n_),
        d_(cols_),
        c_(m_),
        basis_(n_),
        row_of_(cols_, -1),
        at_upper_(cols_, 0),
        b_orig_(prob.b),
        a_orig_(prob.A),
        options_(options) {
    prob.check();
    for (size_t j = 0; j < m_; ++j) c_[j] = NumTraits<Scalar>::from(prob.objective[j]);
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = 0; j < m_; ++j) tab_[i * cols_ + j] = Scalar(prob.A(i, j));
      tab_[i * cols_ + m_ + i] = Scalar(1);
      beta_[i] = Scalar(prob.b[i]);
      basis_[i] = static_cast<int>(m_ + i);
      row_of_[m_ + i] = static_cast<int>(i);
    }
    for (size_t j = 0; j < m_; ++j) d_[j] = c_[j];
    if constexpr (!NumTraits<Scalar>::kExact) {
      if (options.perturbation_seed) {
        Rng rng(*options.perturbation_seed);
        for (size_t j = 0; j < m_; ++j)
          d_[j] += options.perturbation_scale * (1.0 + std::abs(c_[j])) * rng.uniform01();
      }
    }
  }

  /// Runs primal simplex to optimality. Throws SolverError if the LP is
  /// unbounded or the pivot cap is hit.
  void solve() {
    const int cap = options_.max_pivots > 0
                        ? options_.max_pivots
                        : static_cast<int>(50 * (n_ + m_) + 1000);
    while (true) {
      int entering = choose_entering();
      if (entering < 0) return;
      if (pivots_ >= cap) throw SolverError("simplex pivot cap reached");
      step(static_cast<size_t>(entering));
    }
  }

  LpSolution<Scalar> primal() const {
    LpSolution<Scalar> sol;
    sol.x.assign(m_, Scalar(0));
    for (size_t j = 0; j < m_; ++j) {
      if (row_of_[j] >= 0) {
        sol.x[j] = beta_[static_cast<size_t>(row_of_[j])];
      } else if (at_upper_[j]) {
        sol.x[j] = Scalar(1);
      }
    }
    sol.value = Scalar(0);
    for (size_t j = 0; j < m_; ++j) sol.value += c_[j] * sol.x[j];
    sol.basis = basis_;
    sol.at_upper.assign(at_upper_.begin(), at_upper_.begin() + static_cast<long>(m_));
    sol.pivots = pivots_;
    return sol;
  }

  /// Duals read off the final basis: y = c_B B^{-1}, and each structural
  /// resting at its upper bound carries multiplier c_j - (y^T A)_j.
  DualSolution<Scalar> dual() const {
    DualSolution<Scalar> dual;
    dual.y.resize(n_);
    dual.bound_duals.assign(m_, Scalar(0));
    // Unperturbed objective.
    std::vector<Scalar> cb(n_);
    for (size_t i = 0; i < n_; ++i) {
      size_t v = static_cast<size_t>(basis_[i]);
      cb[i] = v < m_ ? c_[v] : Scalar(0);
    }
    for (size_t k = 0; k < n_; ++k) {
      // B^{-1} sits in the slack columns of the tableau.
      Scalar s(0);
      for (size_t i = 0; i < n_; ++i) s += cb[i] * tab_[i * cols_ + m_ + k];
      NumTraits<Scalar>::clean(s);
      dual.y[k] = s;
    }
    dual.value = Scalar(0);
    for (size_t k = 0; k < n_; ++k) dual.value += dual.y[k] * b_value(k);
    if (explicit_bounds_) {
      for (size_t j = 0; j < m_; ++j) {
        if (row_of_[j] >= 0 || !at_upper_[j]) continue;
        Scalar col(0);
        for (size_t i = 0; i < n_; ++i) col += dual.y[i] * a_value(i, j);
        Scalar r = c_[j] - col;
        NumTraits<Scalar>::clean(r);
        if (NumTraits<Scalar>::positive(r)) {
          dual.bound_duals[j] = r;
          dual.value += r;
        }
      }
    }
    return dual;
  }

  int pivots() const { return pivots_; }

  /// Structured-text dump of the current tableau for debugging.
  void dump(std::ostream& os) const {
    os << "tableau rows=" << n_ << " structural=" << m_ << " pivots=" << pivots_ << "\n";
    os << "basis:";
    for (int v : basis_) os << ' ' << v;
    os << "\nreduced_costs:";
    for (const auto& v : d_) os << ' ' << v;
    os << "\n";
    for (size_t i = 0; i < n_; ++i) {
      os << "row " << i << " beta=" << beta_[i] << " |";
      for (size_t j = 0; j < cols_; ++j) os << ' ' << tab_[i * cols_ + j];
      os << "\n";
    }
  }

 private:
  Scalar b_value(size_t i) const { return Scalar(b_orig_[i]); }
  Scalar a_value(size_t i, size_t j) const { return Scalar(a_orig_(i, j)); }

  bool has_upper(size_t var) const { return explicit_bounds_ && var < m_; }

  int choose_entering() const {
    for (size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] >= 0) continue;
      if (!at_upper_[j] && NumTraits<Scalar>::positive(d_[j])) return static_cast<int>(j);
      if (at_upper_[j] && NumTraits<Scalar>::negative(d_[j])) return static_cast<int>(j);
    }
    return -1;
  }

  void step(size_t j) {
    const bool increase = !at_upper_[j];
    // Basic variable in row i moves by -dir * tab(i, j) per unit step.
    std::optional<Scalar> best;
    int leave_row = -1;
    bool leave_to_upper = false;
    for (size_t i = 0; i < n_; ++i) {
      Scalar a = tab_[i * cols_ + j];
      if (!increase) a = -a;
      Scalar ratio;
      bool to_upper;
      if (NumTraits<Scalar>::positive(a)) {
        ratio = beta_[i] / a;
        to_upper = false;
      } else if (NumTraits<Scalar>::negative(a) &&
                 has_upper(static_cast<size_t>(basis_[i]))) {
        ratio = (Scalar(1) - beta_[i]) / (-a);
        to_upper = true;
      } else {
        continue;
      }
      if (NumTraits<Scalar>::negative(ratio) || ratio < Scalar(0)) ratio = Scalar(0);
      bool better = !best || ratio < *best;
      if (!better && best) {
        // Least-index tie-break on the leaving variable.
        bool tie;
        if constexpr (NumTraits<Scalar>::kExact) {
          tie = ratio == *best;
        } else {
          tie = std::abs(ratio - *best) <= 1e-12;
        }
        better = tie && basis_[i] < basis_[static_cast<size_t>(leave_row)];
      }
      if (better) {
        if (!best || ratio < *best) best = ratio;
        leave_row = static_cast<int>(i);
        leave_to_upper = to_upper;
      }
    }
    const bool can_flip = has_upper(j);
    if (!best && !can_flip) throw SolverError("LP is unbounded");
    ++pivots_;
    if (can_flip && (!best || Scalar(1) < *best)) {
      // Bound flip: entering variable travels its whole range.
      const Scalar dir = increase ? Scalar(1) : Scalar(-1);
      for (size_t i = 0; i < n_; ++i) {
        beta_[i] -= dir * tab_[i * cols_ + j];
        NumTraits<Scalar>::clean(beta_[i]);
      }
      at_upper_[j] = increase ? 1 : 0;
      return;
    }
    const Scalar theta = *best;
    const Scalar dir = increase ? Scalar(1) : Scalar(-1);
    const size_t r = static_cast<size_t>(leave_row);
    for (size_t i = 0; i < n_; ++i) {
      if (i == r) continue;
      beta_[i] -= dir * theta * tab_[i * cols_ + j];
      NumTraits<Scalar>::clean(beta_[i]);
    }
    Scalar entering_value = (increase ? Scalar(0) : Scalar(1)) + dir * theta;
    size_t leaving = static_cast<size_t>(basis_[r]);
    row_of_[leaving] = -1;
    at_upper_[leaving] = leave_to_upper ? 1 : 0;
    basis_[r] = static_cast<int>(j);
    row_of_[j] = static_cast<int>(r);
    at_upper_[j] = 0;
    beta_[r] = entering_value;
    pivot(r, j);
  }

  void pivot(size_t r, size_t j) {
    Scalar* prow = &tab_[r * cols_];
    const Scalar inv = Scalar(1) / prow[j];
    for (size_t k = 0; k < cols_; ++k) {
      if (prow[k] != Scalar(0)) prow[k] *= inv;
    }
    prow[j] = Scalar(1);
    for (size_t i = 0; i < n_; ++i) {
      if (i == r) continue;
      Scalar* row = &tab_[i * cols_];
      const Scalar f = row[j];
      if (f == Scalar(0)) continue;
      for (size_t k = 0; k < cols_; ++k) {
        if (prow[k] == Scalar(0)) continue;
        row[k] -= f * prow[k];
        NumTraits<Scalar>::clean(row[k]);
      }
      row[j] = Scalar(0);
    }
    const Scalar f = d_[j];
    if (f != Scalar(0)) {
      for (size_t k = 0; k < cols_; ++k) {
        if (prow[k] == Scalar(0)) continue;
        d_[k] -= f * prow[k];
        NumTraits<Scalar>::clean(d_[k]);
      }
    }
    d_[j] = Scalar(0);
  }

  size_t n_, m_, cols_;
  bool explicit_bounds_;
  std::vector<Scalar> tab_;
  std::vector<Scalar> beta_;
  std::vector<Scalar> d_;
  std::vector<Scalar> c_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<uint8_t> at_upper_;
  std::vector<int64_t> b_orig_;
  Matrix<int64_t> a_orig_;
  SolveOptions options_;
  int pivots_ = 0;
};

template <class Scalar>
struct PrimalDual {
  LpSolution<Scalar> primal;
  DualSolution<Scalar> dual;
};

/// Solves and returns both the optimal basic solution and the duals read
/// from its basis.
template <class Scalar>
PrimalDual<Scalar> solve_lp(const LpProblem& prob, const SolveOptions& options = {}) {
  BoundedSimplex<Scalar> simplex(prob, options);
  simplex.solve();
  return {simplex.primal(), simplex.dual()};
}

template <class Scalar>
LpSolution<Scalar> solve_primal(const LpProblem& prob, const SolveOptions& options = {}) {
  BoundedSimplex<Scalar> simplex(prob, options);
  simplex.solve();
  return simplex.primal();
}

template <class Scalar>
DualSolution<Scalar> solve_dual(const LpProblem& prob, const SolveOptions& options = {}) {
  return solve_lp<Scalar>(prob, options).dual;
}

/// Optimal value only, in the requested arithmetic.
inline double solve_value(const LpProblem& prob, Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::kRational) return to_double(solve_primal<Rational>(prob).value);
  return solve_primal<double>(prob).value;
}

// ---------------------------------------------------------------------------
// Explicit dual, solved independently of the primal basis:
//
//   min b.y + 1.r  s.t.  A^T y + r >= c,  y, r >= 0
//
// (r only with explicit unit bounds) by a two-phase tableau simplex over
// equality rows A^T y + r - s + art = c.

template <class Scalar>
class ExplicitDualSolver {
 public:
  explicit ExplicitDualSolver(const LpProblem& prob) : prob_(prob) { prob.check(); }

  DualSolution<Scalar> solve() {
    const size_t n = prob_.rows();
    const size_t m = prob_.cols();
    const size_t nr = prob_.explicit_unit_bounds ? m : 0;
    // Columns: y (n) | r (nr) | surplus (m) | artificial (m).
    const size_t y0 = 0, r0 = n, s0 = n + nr, a0 = n + nr + m;
    cols_ = a0 + m;
    rows_ = m;
    tab_.assign(rows_ * cols_, Scalar(0));
    rhs_.assign(rows_, Scalar(0));
    basis_.assign(rows_, 0);
    for (size_t j = 0; j < m; ++j) {
      for (size_t i = 0; i < n; ++i) at(j, y0 + i) = Scalar(prob_.A(i, j));
      if (nr) at(j, r0 + j) = Scalar(1);
      at(j, s0 + j) = Scalar(-1);
      at(j, a0 + j) = Scalar(1);
      rhs_[j] = NumTraits<Scalar>::from(prob_.objective[j]);
      basis_[j] = static_cast<int>(a0 + j);
    }
    // Phase one: minimize the sum of artificials.
    std::vector<Scalar> cost1(cols_, Scalar(0));
    for (size_t j = 0; j < m; ++j) cost1[a0 + j] = Scalar(1);
    run(cost1, cols_);
    Scalar infeas(0);
    for (size_t j = 0; j < rows_; ++j)
      if (static_cast<size_t>(basis_[j]) >= a0) infeas += rhs_[j];
    if (NumTraits<Scalar>::positive(infeas)) throw SolverError("explicit dual infeasible");
    // Drive zero-valued artificials out of the basis where possible.
    for (size_t r = 0; r < rows_; ++r) {
      if (static_cast<size_t>(basis_[r]) < a0) continue;
      for (size_t k = 0; k < a0; ++k) {
        if (!NumTraits<Scalar>::is_zero(at(r, k))) {
          pivot(r, k);
          break;
        }
      }
    }
    // Phase two over the non-artificial columns.
    std::vector<Scalar> cost2(cols_, Scalar(0));
    for (size_t i = 0; i < n; ++i) cost2[y0 + i] = Scalar(prob_.b[i]);
    for (size_t j = 0; j < nr; ++j) cost2[r0 + j] = Scalar(1);
    run(cost2, a0);

    DualSolution<Scalar> out;
    out.y.assign(n, Scalar(0));
    out.bound_duals.assign(m, Scalar(0));
    for (size_t r = 0; r < rows_; ++r) {
      size_t v = static_cast<size_t>(basis_[r]);
      if (v < r0) out.y[v] = rhs_[r];
      else if (v < s0) out.bound_duals[v - r0] = rhs_[r];
    }
    out.value = Scalar(0);
    for (size_t i = 0; i < n; ++i) out.value += out.y[i] * Scalar(prob_.b[i]);
    for (size_t j = 0; j < m; ++j) out.value += out.bound_duals[j];
    return out;
  }

 private:
  Scalar& at(size_t r, size_t c) { return tab_[r * cols_ + c]; }

  // Minimizes cost over columns [0, allowed) with least-index pivoting.
  void run(const std::vector<Scalar>& cost, size_t allowed) {
    const int cap = static_cast<int>(50 * (rows_ + cols_) + 1000);
    for (int it = 0;; ++it) {
      if (it > cap) throw SolverError("explicit dual pivot cap reached");
      // Reduced costs d_k = cost_k - cost_B B^{-1} a_k (tableau is B^{-1} A).
      int entering = -1;
      for (size_t k = 0; k < allowed && entering < 0; ++k) {
        bool basic = false;
        for (int v : basis_) basic |= static_cast<size_t>(v) == k;
        if (basic) continue;
        Scalar dk = cost[k];
        for (size_t r = 0; r < rows_; ++r) dk -= cost[static_cast<size_t>(basis_[r])] * at(r, k);
        if (NumTraits<Scalar>::negative(dk)) entering = static_cast<int>(k);
      }
      if (entering < 0) return;
      const size_t k = static_cast<size_t>(entering);
      int leave = -1;
      Scalar best(0);
      for (size_t r = 0; r < rows_; ++r) {
        if (!NumTraits<Scalar>::positive(at(r, k))) continue;
        Scalar ratio = rhs_[r] / at(r, k);
        bool better = leave < 0 || ratio < best;
        if (!better) {
          bool tie;
          if constexpr (NumTraits<Scalar>::kExact) {
            tie = ratio == best;
          } else {
            tie = std::abs(ratio - best) <= 1e-12;
          }
          better = tie && basis_[r] < basis_[static_cast<size_t>(leave)];
        }
        if (better) {
          leave = static_cast<int>(r);
          best = ratio;
        }
      }
      if (leave < 0) throw SolverError("explicit dual unbounded");
      pivot(static_cast<size_t>(leave), k);
    }
  }

  void pivot(size_t r, size_t k) {
    const Scalar inv = Scalar(1) / at(r, k);
    for (size_t c = 0; c < cols_; ++c) at(r, c) *= inv;
    rhs_[r] *= inv;
    at(r, k) = Scalar(1);
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const Scalar f = at(i, k);
      if (f == Scalar(0)) continue;
      for (size_t c = 0; c < cols_; ++c) {
        at(i, c) -= f * at(r, c);
        NumTraits<Scalar>::clean(at(i, c));
      }
      rhs_[i] -= f * rhs_[r];
      NumTraits<Scalar>::clean(rhs_[i]);
      at(i, k) = Scalar(0);
    }
    basis_[r] = static_cast<int>(k);
  }

  const LpProblem& prob_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> tab_;
  std::vector<Scalar> rhs_;
  std::vector<int> basis_;
};

template <class Scalar>
DualSolution<Scalar> solve_dual_explicit(const LpProblem& prob) {
  return ExplicitDualSolver<Scalar>(prob).solve();
}

// ---------------------------------------------------------------------------

struct DualityReport {
  bool ok = true;
  double gap = 0.0;
  double primal_violation = 0.0;  // worst max(0, A_i x - b_i) or bound breach
  std::optional<size_t> worst_primal_row;
  double dual_violation = 0.0;  // worst max(0, c_j - (y^T A)_j - r_j) or y_i < 0
  std::optional<size_t> worst_dual_column;
  double slackness_violation = 0.0;
  std::vector<std::string> messages;
};

/// Strong duality, primal and dual feasibility, and complementary
/// slackness. In rational mode every check is exact (tolerance 0).
template <class Scalar>
DualityReport check_duality(const LpProblem& prob, const LpSolution<Scalar>& primal,
                            const DualSolution<Scalar>& dual) {
  const bool exact = NumTraits<Scalar>::kExact;
  const double feas_tol = exact ? 0.0 : kFeasTol * 100;
  const double gap_tol = exact ? 0.0 : kGapTol;
  const size_t n = prob.rows(), m = prob.cols();
  DualityReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.messages.push_back(std::move(msg));
  };
  if (primal.x.size() != m || dual.y.size() != n) {
    fail("dimension mismatch between problem and solutions");
    return rep;
  }
  Scalar pval(0), dval(0);
  for (size_t j = 0; j < m; ++j) pval += NumTraits<Scalar>::from(prob.objective[j]) * primal.x[j];
  for (size_t i = 0; i < n; ++i) dval += dual.y[i] * Scalar(prob.b[i]);
  for (size_t j = 0; j < dual.bound_duals.size(); ++j) dval += dual.bound_duals[j];
  rep.gap = std::abs(to_double(Scalar(pval - dval)));
  if (exact ? pval != dval : rep.gap > gap_tol)
    fail("duality gap " + std::to_string(rep.gap));

  // Primal feasibility and row slackness.
  for (size_t i = 0; i < n; ++i) {
    Scalar lhs(0);
    for (size_t j = 0; j < m; ++j) lhs += Scalar(prob.A(i, j)) * primal.x[j];
    Scalar slack = Scalar(prob.b[i]) - lhs;
    double viol = std::max(0.0, -to_double(slack));
    if (exact ? slack < 0 : viol > feas_tol) {
      if (viol >= rep.primal_violation) {
        rep.primal_violation = viol;
        rep.worst_primal_row = i;
      }
      fail("row " + std::to_string(i) + " violated by " + std::to_string(viol));
    }
    double cs = std::abs(to_double(Scalar(slack * dual.y[i])));
    rep.slackness_violation = std::max(rep.slackness_violation, cs);
    if (exact ? slack * dual.y[i] != 0 : cs > gap_tol)
      fail("slackness fails on row " + std::to_string(i));
    if (exact ? dual.y[i] < 0 : to_double(dual.y[i]) < -feas_tol)
      fail("negative dual on row " + std::to_string(i));
  }
  for (size_t j = 0; j < m; ++j) {
    double xj = to_double(primal.x[j]);
    bool out_of_bounds = exact ? (primal.x[j] < 0 || primal.x[j] > 1)
                               : (xj < -feas_tol || xj > 1 + feas_tol);
    if (out_of_bounds) fail("x[" + std::to_string(j) + "] outside [0, 1]");
  }
  // Dual feasibility and column slackness.
  for (size_t j = 0; j < m; ++j) {
    Scalar col(0);
    for (size_t i = 0; i < n; ++i) col += dual.y[i] * Scalar(prob.A(i, j));
    Scalar rj = j < dual.bound_duals.size() ? dual.bound_duals[j] : Scalar(0);
    Scalar reduced = col + rj - NumTraits<Scalar>::from(prob.objective[j]);
    double viol = std::max(0.0, -to_double(reduced));
    if (exact ? reduced < 0 : viol > feas_tol) {
      if (viol >= rep.dual_violation) {
        rep.dual_violation = viol;
        rep.worst_dual_column = j;
      }
      fail("dual constraint of column " + std::to_string(j) + " violated by " +
           std::to_string(viol));
    }
    double cs = std::abs(to_double(Scalar(reduced * primal.x[j])));
    rep.slackness_violation = std::max(rep.slackness_violation, cs);
    if (exact ? reduced * primal.x[j] != 0 : cs > gap_tol)
      fail("slackness fails on column " + std::to_string(j));
    Scalar bound_cs = rj * (Scalar(1) - primal.x[j]);
    if (exact ? bound_cs != 0 : std::abs(to_double(bound_cs)) > gap_tol)
      fail("bound slackness fails on column " + std::to_string(j));
  }
  return rep;
}

}  // namespace stochpack
