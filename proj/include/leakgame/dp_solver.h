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

// Equilibria of differential-privacy games.
//
// With hidden choice the defender minimizes the largest ratio
//
//   f_j(delta) / g_j(delta),  j = (a, x, x', y),  x ~ x',
//   f_j(delta) = sum_d delta(d) C_da(x, y),  g_j(delta) = sum_d delta(d) C_da(x', y)
//
// over the simplex, which is a generalized linear-fractional program. The
// solver runs the Dinkelbach iteration: lambda_k is the largest ratio at
// delta_{k-1}, and delta_k minimizes F_k(delta) = max_j f_j - lambda_k g_j,
// found as the linear program
//
//   minimize z  s.t.  z >= f_j(delta) - lambda_k g_j(delta),  sum delta = 1,  delta >= 0.
//
// A term whose channels all vanish on the support of delta contributes 0 to
// F_k but nothing to the ratio, so F_k(delta_k) = 0 is not a proof of
// optimality and ties on such faces can stall the iteration. The solver
// therefore keeps a bracket [lower, best] on the optimal ratio: Dinkelbach
// steps lower `best` while they make progress, and a stalled step is followed
// by a bisection probe in which the LP serves as a feasibility oracle for
// "every ratio <= lambda". It stops once ln(best) - ln(lower) <= tolerance
// and reports ln(best) in nats together with that gap. Both orientations of every adjacent pair appear in
// the term list so the ratio captures the absolute log difference.
//
// With visible choice the level of a visible mixture is the max over its
// support, so some pure strategy is optimal and the solve is an argmin-max.

#ifndef LEAKGAME_DP_SOLVER_H_
#define LEAKGAME_DP_SOLVER_H_

#include <cstdint>
#include <vector>

#include "leakgame/core.h"
#include "leakgame/measures.h"

namespace leakgame {

struct RatioTerm {
  // Coefficients over defender actions; both have length |D|.
  std::vector<double> f;
  std::vector<double> g;
};

struct LpProblem {
  // Defender weights plus the epigraph variable z.
  std::size_t num_vars = 0;
  std::vector<RatioTerm> ratio_terms;
  double lambda = 0.0;

  std::size_t num_defender_actions() const { return num_vars - 1; }
};

struct LpResult {
  std::vector<double> delta;
  // max_j f_j(delta) - lambda g_j(delta), recomputed at the returned delta.
  double z = 0.0;
};

// Ratio terms of a DP game for every attacker action, ordered adjacent pair
// and output. Terms whose coefficients are all zero are omitted.
LpProblem BuildLpProblem(const GameSpec& game, double lambda = 0.0);

// Minimizes max_j f_j - lambda g_j over the simplex. Throws kInfeasible or
// kNumericalFailure if the simplex method does not reach an optimum.
LpResult SolveLp(const LpProblem& problem);

DpLevel DpUtilityHidden(const GameSpec& game, const MixedStrategy& delta,
                        const MixedStrategy& alpha);
DpLevel DpUtilityVisible(const GameSpec& game, const MixedStrategy& delta,
                         const MixedStrategy& alpha);
// max over supp(delta) x supp(alpha) of the level of C_da.
DpLevel HiddenUpperBound(const GameSpec& game, const MixedStrategy& delta,
                         const MixedStrategy& alpha);

struct DpSolverOptions {
  double tolerance = 1e-9;
  std::int64_t max_iter = 1000;
};

// One record per Dinkelbach iteration k = 1, 2, ...
struct DinkelbachStep {
  double lambda;
  // F_k(delta_k).
  double f_value;
  std::vector<double> delta;
};

// Returns a report flagged certified = false, holding the best iterate, if
// max_iter is exhausted.
SolveReport SolveDpHidden(const GameSpec& game, const DpSolverOptions& options = {},
                          std::vector<DinkelbachStep>* trace = nullptr);
SolveReport SolveDpVisible(const GameSpec& game);

}  // namespace leakgame

#endif  // LEAKGAME_DP_SOLVER_H_
