// Copyright 2026 The Leakgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leakgame/lp.h"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "leakgame/core.h"

namespace leakgame {

namespace {

// The tableau is kept in extended precision: Dinkelbach subproblems are
// highly degenerate and drift in double precision reached 1e-6.
using Real = long double;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

constexpr Real kPivotTolerance = 1e-11L;
constexpr Real kCostTolerance = 1e-12L;

// Tableau layout: rows 0..m-1 are constraints, row m is the objective
// (reduced costs). The last column is the right-hand side.
class Tableau {
 public:
  Tableau(RealMatrix t, std::vector<int> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int rhs_col() const { return static_cast<int>(t_.cols()) - 1; }
  RealMatrix& t() { return t_; }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int r = 0; r < static_cast<int>(t_.rows()); ++r) {
      if (r == row) continue;
      const Real factor = t_(r, col);
      if (factor != 0.0) t_.row(r) -= factor * t_.row(row);
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Runs Bland's-rule iterations over the first `usable_cols` columns.
  // Returns false if unbounded.
  bool Optimize(int usable_cols) {
    const int m = rows();
    const int rhs = rhs_col();
    for (;;) {
      int enter = -1;
      for (int c = 0; c < usable_cols; ++c) {
        if (t_(m, c) < -kCostTolerance) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Real best_ratio = std::numeric_limits<Real>::infinity();
      for (int r = 0; r < m; ++r) {
        const Real a = t_(r, enter);
        if (a <= kPivotTolerance) continue;
        const Real ratio = t_(r, rhs) / a;
        // Ties go to the larger pivot element, then to the lower basic index.
        const bool tie = leave >= 0 && std::abs(ratio - best_ratio) <= 1e-15L;
        if ((!tie && ratio < best_ratio) ||
            (tie && (a > t_(leave, enter) * 2 ||
                     (a * 2 >= t_(leave, enter) && basis_[r] < basis_[leave])))) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
  }

  int pivots() const { return pivots_; }

 private:
  RealMatrix t_;
  std::vector<int> basis_;
  int pivots_ = 0;
};

}  // namespace

LpSolution SolveDenseLp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.objective.size());
  const int m_ub = static_cast<int>(lp.a_ub.rows());
  const int m_eq = static_cast<int>(lp.a_eq.rows());
  if ((m_ub > 0 && lp.a_ub.cols() != n) || (m_eq > 0 && lp.a_eq.cols() != n) ||
      lp.b_ub.size() != m_ub || lp.b_eq.size() != m_eq) {
    throw Error(ErrorCode::kDimensionMismatch, "linear program dimensions are inconsistent");
  }
  const int m = m_ub + m_eq;

  // Rows needing an artificial variable: equalities, and inequalities whose
  // right-hand side is negative (their slack would start infeasible).
  std::vector<bool> needs_artificial(m, false);
  int num_artificial = 0;
  for (int i = 0; i < m_ub; ++i) {
    if (lp.b_ub(i) < 0.0) {
      needs_artificial[i] = true;
      ++num_artificial;
    }
  }
  for (int i = 0; i < m_eq; ++i) {
    needs_artificial[m_ub + i] = true;
    ++num_artificial;
  }

  // Columns: x (n) | slacks (m_ub) | artificials | rhs.
  const int slack0 = n;
  const int art0 = n + m_ub;
  const int cols = art0 + num_artificial + 1;
  RealMatrix t = RealMatrix::Zero(m + 1, cols);
  std::vector<int> basis(m, -1);
  int next_art = art0;
  for (int i = 0; i < m_ub; ++i) {
    const double sign = lp.b_ub(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = (sign * lp.a_ub.row(i)).cast<Real>();
    t(i, slack0 + i) = sign;
    t(i, cols - 1) = sign * lp.b_ub(i);
    if (needs_artificial[i]) {
      t(i, next_art) = 1.0;
      basis[i] = next_art++;
    } else {
      basis[i] = slack0 + i;
    }
  }
  for (int i = 0; i < m_eq; ++i) {
    const int r = m_ub + i;
    const double sign = lp.b_eq(i) < 0.0 ? -1.0 : 1.0;
    t.row(r).head(n) = (sign * lp.a_eq.row(i)).cast<Real>();
    t(r, cols - 1) = sign * lp.b_eq(i);
    t(r, next_art) = 1.0;
    basis[r] = next_art++;
  }

  const RealMatrix original = t.topRows(m);
  Tableau tab(std::move(t), std::move(basis));
  LpSolution out;

  // Phase 1: minimize the sum of artificials.
  if (num_artificial > 0) {
    auto& tt = tab.t();
    tt.row(m).setZero();
    for (int r = 0; r < m; ++r) {
      if (needs_artificial[r]) tt.row(m) -= tt.row(r);
    }
    for (int c = art0; c < art0 + num_artificial; ++c) tt(m, c) = 0.0;
    tab.Optimize(art0 + num_artificial);
    if (-tt(m, cols - 1) > 1e-9) {
      out.status = LpStatus::kInfeasible;
      out.pivots = tab.pivots();
      return out;
    }
    // Drive any remaining (zero-valued) artificials out of the basis.
    for (int r = 0; r < m; ++r) {
      if (tab.basis()[r] < art0) continue;
      int best = -1;
      for (int c = 0; c < art0; ++c) {
        if (std::abs(tt(r, c)) > kPivotTolerance &&
            (best < 0 || std::abs(tt(r, c)) > std::abs(tt(r, best)))) {
          best = c;
        }
      }
      if (best >= 0) tab.Pivot(r, best);
      // A row left with only artificials is redundant; its artificial stays
      // basic at zero and is excluded from phase 2 pricing.
    }
  }

  // Phase 2 objective row: c minus c_B B^{-1} A.
  auto& tt = tab.t();
  tt.row(m).setZero();
  tt.row(m).head(n) = lp.objective.transpose().cast<Real>();
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis()[r];
    if (b < n && lp.objective(b) != 0.0) tt.row(m) -= static_cast<Real>(lp.objective(b)) * tt.row(r);
  }
  if (!tab.Optimize(art0)) {
    out.status = LpStatus::kUnbounded;
    out.pivots = tab.pivots();
    return out;
  }

  // The tableau carries rounding from every pivot; recover the basic
  // solution from the original columns of the final basis instead.
  RealMatrix basis_matrix(m, m);
  for (int r = 0; r < m; ++r) basis_matrix.col(r) = original.col(tab.basis()[r]);
  const Eigen::FullPivLU<RealMatrix> lu(basis_matrix);
  RealVector x_basic = lu.solve(RealVector(original.col(cols - 1)));
  if (!lu.isInvertible() || !x_basic.allFinite()) x_basic = tt.col(cols - 1).head(m);

  out.status = LpStatus::kOptimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis()[r];
    if (b < n) out.x(b) = std::max(0.0, static_cast<double>(x_basic(r)));
  }
  out.objective = lp.objective.dot(out.x);
  out.pivots = tab.pivots();
  return out;
}

}  // namespace leakgame
