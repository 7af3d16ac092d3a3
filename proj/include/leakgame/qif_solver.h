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

// Equilibria of QIF games.
//
// The defender's equilibrium strategy minimizes
//
//   f(delta) = max_a V[pi, sum_d delta(d) C_da]
//
// over the simplex; the attacker's inner maximization is attained at a pure
// action because the utility is affine in the attacker's strategy. f is
// convex and piecewise linear for g-vulnerabilities, and is minimized by
// projected subgradient descent
//
//   delta_1 = uniform,  delta_{k+1} = P(delta_k - s_k h_k),  s_k = 0.1 / sqrt(k)
//
// with the certificate lower bound
//
//   l_k = (2 sum s_i f(delta_i) - R^2 - sum s_i^2 |h_i|^2) / (2 sum s_i)
//
// where R^2 = (n - 1) / n bounds |delta_1 - delta*|^2 on the n-simplex,
// n = |D|.
//
// Subgradient. For fixed a* and per-column optimal guesses w*_y, f is the
// linear function delta -> sum_d delta(d) sum_y sum_x pi(x) C_da*(x, y)
// g(w*_y, x) locally from below, so
//
//   h_d = sum_y sum_x pi(x) C_da*(x, y) g(w*_y, x).
//
// The variant h_d = delta(d) sum_y pi(x*_y) C_da*(x*_y, y), scaled by the
// current weight of d, is not a subgradient: on the binary-sum game at
// delta = (0.2, 0.8) it gives (0, 0.8), yet f(0.5, 0.5) = 0.5 < 0.8 - 0.24.

#ifndef LEAKGAME_QIF_SOLVER_H_
#define LEAKGAME_QIF_SOLVER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "leakgame/core.h"

namespace leakgame {

struct FValue {
  double value = 0.0;
  // Lowest attacker index attaining the max.
  std::size_t argmax_action = 0;
};

// Precomputed gain-weighted channel tensor of a QIF game:
//
//   K_a(y, w, d) = sum_x pi(x) C_da(x, y) g(w, x)
//
// so that f(delta) = max_a sum_y max_w (K_a(y, w, .) . delta) and the
// subgradient is h_d = sum_y K_a*(y, w*_y, d).
class QifObjective {
 public:
  // Scratch buffers for allocation-free evaluation in tight loops.
  struct Workspace {
    Eigen::VectorXd scores;
    std::vector<std::size_t> best_rows;
    std::vector<std::size_t> candidate_rows;
  };

  explicit QifObjective(const GameSpec& game);

  std::size_t num_defender_actions() const { return num_defender_; }
  std::size_t num_attacker_actions() const { return tensors_.size(); }

  // Posterior vulnerability of the hidden choice at attacker action a.
  double ValueAt(std::span<const double> delta, std::size_t a) const;
  FValue Evaluate(std::span<const double> delta) const;
  // Evaluates f and writes a subgradient into `h` (size |D|).
  FValue EvaluateWithSubgradient(std::span<const double> delta, std::span<double> h) const;
  FValue EvaluateWithSubgradient(std::span<const double> delta, std::span<double> h,
                                 Workspace& ws) const;
  // Upper bound on |h_d| over the simplex.
  double LipschitzBound() const;

 private:
  // sum_y max_w scores; records the chosen row per column when `best_rows`
  // is non-null (lowest w on ties).
  double ColumnMaxSum(std::size_t a, std::span<const double> delta, Eigen::VectorXd& scores,
                      std::vector<std::size_t>* best_rows) const;

  std::size_t num_defender_;
  std::size_t num_outputs_;
  std::size_t num_guesses_;
  // tensors_[a] is (|Y| * |W|) x |D|, row y * |W| + w.
  std::vector<Eigen::MatrixXd> tensors_;
};

struct DescentState {
  std::vector<double> delta;
  std::int64_t k = 1;
  double step_sum = 0.0;
  double weighted_f_sum = 0.0;
  double grad_norm_sum = 0.0;
  double best_f = 0.0;
  std::vector<double> best_delta;
  double best_lower = 0.0;
};

struct QifSolverOptions {
  double tolerance = 1e-4;
  std::int64_t max_iter = 200000;
  // Step size s_k for k >= 1. Defaults to 0.1 / sqrt(k).
  std::function<double(std::int64_t)> step_size;
};

double QifUtility(const GameSpec& game, const MixedStrategy& delta, const MixedStrategy& alpha);
FValue FValueAt(const GameSpec& game, const MixedStrategy& delta);
std::vector<double> Subgradient(const GameSpec& game, const MixedStrategy& delta);
std::size_t AttackerBestResponse(const GameSpec& game, const MixedStrategy& delta);

// Euclidean projection onto the probability simplex (sort-and-threshold).
std::vector<double> ProjectOntoSimplex(std::span<const double> v);
MixedStrategy ProjectSimplex(std::span<const double> v, const Labels& labels);

// Projected subgradient descent with best-so-far tracking. Stops when
// best_f - best_lower <= tolerance; otherwise returns the best iterate with
// certified = false after max_iter iterations.
SolveReport SolveQif(const GameSpec& game, const QifSolverOptions& options = {});

// Same loop, invoking `observer` after each iteration (used by audits).
SolveReport SolveQif(const GameSpec& game, const QifSolverOptions& options,
                     const std::function<void(const DescentState&)>& observer);

}  // namespace leakgame

#endif  // LEAKGAME_QIF_SOLVER_H_
