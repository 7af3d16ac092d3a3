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

#include "leakgame/dp_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "leakgame/algebra.h"
#include "leakgame/lp.h"

namespace leakgame {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kRelativeProgress = 1e-14;
// LP minima at or below this count as feasible for the bisection probe.
constexpr double kFeasibilityTolerance = 1e-13;

void CheckStrategy(const MixedStrategy& s, const Labels& actions, const char* who) {
  if (s.labels() != actions) {
    throw Error(ErrorCode::kLabelMismatch,
                std::string(who) + " strategy labels differ from the game's actions");
  }
}

double Dot(const std::vector<double>& c, const std::vector<double>& delta) {
  double s = 0.0;
  for (std::size_t d = 0; d < c.size(); ++d) s += c[d] * delta[d];
  return s;
}

bool AllZero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::abs(x) < kZeroThreshold; });
}

// F(delta) = max_j f_j(delta) - lambda g_j(delta).
double FractionalGap(const std::vector<RatioTerm>& terms, double lambda,
                     const std::vector<double>& delta) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) best = std::max(best, Dot(t.f, delta) - lambda * Dot(t.g, delta));
  return best;
}

// max_j f_j(delta) / g_j(delta), skipping terms with f = g = 0.
double MaxRatio(const std::vector<RatioTerm>& terms, const std::vector<double>& delta) {
  double best = 0.0;
  for (const auto& t : terms) {
    const double f = Dot(t.f, delta);
    const double g = Dot(t.g, delta);
    if (f < kZeroThreshold && g < kZeroThreshold) continue;
    if (g < kZeroThreshold) return std::numeric_limits<double>::infinity();
    best = std::max(best, f / g);
  }
  return best;
}

}  // namespace

LpProblem BuildLpProblem(const GameSpec& game, double lambda) {
  const DpMeasure& m = game.dp();
  const std::size_t n = game.num_defender_actions();
  const auto pairs = m.adjacency.Resolve(game.inputs());
  const auto num_outputs = static_cast<Eigen::Index>(game.outputs().size());
  LpProblem problem;
  problem.num_vars = n + 1;
  problem.lambda = lambda;
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    for (const auto& [i, j] : pairs) {
      for (const auto& [x, xp] : {std::pair{i, j}, std::pair{j, i}}) {
        for (Eigen::Index y = 0; y < num_outputs; ++y) {
          RatioTerm term{std::vector<double>(n), std::vector<double>(n)};
          for (std::size_t d = 0; d < n; ++d) {
            const Channel& c = game.channel(d, a);
            term.f[d] = c(static_cast<Eigen::Index>(x), y);
            term.g[d] = c(static_cast<Eigen::Index>(xp), y);
          }
          // An all-zero term would pin z >= 0 and stall the iteration.
          if (AllZero(term.f) && AllZero(term.g)) continue;
          problem.ratio_terms.push_back(std::move(term));
        }
      }
    }
  }
  return problem;
}

LpResult SolveLp(const LpProblem& problem) {
  if (problem.num_vars < 2) {
    throw Error(ErrorCode::kInvalidArgument, "LP needs at least one defender weight");
  }
  const std::size_t n = problem.num_defender_actions();
  const auto rows = static_cast<Eigen::Index>(problem.ratio_terms.size());
  const auto cols = static_cast<Eigen::Index>(n + 2);  // delta, z+, z-

  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(cols);
  lp.objective(cols - 2) = 1.0;
  lp.objective(cols - 1) = -1.0;
  lp.a_ub = Eigen::MatrixXd::Zero(rows, cols);
  lp.b_ub = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const RatioTerm& t = problem.ratio_terms[static_cast<std::size_t>(r)];
    if (t.f.size() != n || t.g.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "ratio term length differs from |D|");
    }
    for (std::size_t d = 0; d < n; ++d) {
      lp.a_ub(r, static_cast<Eigen::Index>(d)) = t.f[d] - problem.lambda * t.g[d];
    }
    lp.a_ub(r, cols - 2) = -1.0;
    lp.a_ub(r, cols - 1) = 1.0;
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, cols);
  lp.a_eq.row(0).head(static_cast<Eigen::Index>(n)).setOnes();
  lp.b_eq = Eigen::VectorXd::Ones(1);

  const LpSolution sol = SolveDenseLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "simplex-constrained LP reported infeasible");
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericalFailure, "epigraph LP reported unbounded");
  }

  LpResult out;
  out.delta.assign(n, 0.0);
  double sum = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    out.delta[d] = std::max(0.0, sol.x(static_cast<Eigen::Index>(d)));
    sum += out.delta[d];
  }
  if (!(std::abs(sum - 1.0) < 1e-6)) {
    throw Error(ErrorCode::kNumericalFailure, "LP solution is off the simplex");
  }
  for (double& v : out.delta) v /= sum;
  out.z = rows == 0 ? 0.0 : FractionalGap(problem.ratio_terms, problem.lambda, out.delta);
  if (rows > 0 && std::abs(out.z - sol.objective) > 1e-7) {
    std::ostringstream os;
    os.precision(17);
    os << "LP objective " << sol.objective << " disagrees with the recomputed max " << out.z
       << " at lambda " << problem.lambda;
    throw Error(ErrorCode::kNumericalFailure, os.str());
  }
  return out;
}

DpLevel DpUtilityHidden(const GameSpec& game, const MixedStrategy& delta,
                        const MixedStrategy& alpha) {
  const DpMeasure& m = game.dp();
  CheckStrategy(delta, game.defender_actions(), "defender");
  CheckStrategy(alpha, game.attacker_actions(), "attacker");
  std::vector<Channel> per_attack;
  per_attack.reserve(game.num_attacker_actions());
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    per_attack.push_back(HiddenChoice(delta, game.ChannelsForAttack(a)));
  }
  return DpLevelOf(VisibleChoice(alpha, per_attack), m.adjacency);
}

DpLevel DpUtilityVisible(const GameSpec& game, const MixedStrategy& delta,
                         const MixedStrategy& alpha) {
  const DpMeasure& m = game.dp();
  CheckStrategy(delta, game.defender_actions(), "defender");
  CheckStrategy(alpha, game.attacker_actions(), "attacker");
  std::vector<Channel> per_attack;
  per_attack.reserve(game.num_attacker_actions());
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    per_attack.push_back(VisibleChoice(delta, game.ChannelsForAttack(a)));
  }
  return DpLevelOf(VisibleChoice(alpha, per_attack), m.adjacency);
}

DpLevel HiddenUpperBound(const GameSpec& game, const MixedStrategy& delta,
                         const MixedStrategy& alpha) {
  const DpMeasure& m = game.dp();
  CheckStrategy(delta, game.defender_actions(), "defender");
  CheckStrategy(alpha, game.attacker_actions(), "attacker");
  DpLevel best = DpLevel::Finite(0.0);
  for (std::size_t d : delta.Support()) {
    for (std::size_t a : alpha.Support()) {
      best = std::max(best, DpLevelOf(game.channel(d, a), m.adjacency));
    }
  }
  return best;
}

SolveReport SolveDpHidden(const GameSpec& game, const DpSolverOptions& options,
                          std::vector<DinkelbachStep>* trace) {
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (options.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  LpProblem problem = BuildLpProblem(game);
  const std::size_t n = game.num_defender_actions();
  const MixedStrategy attacker = Uniform(game.attacker_actions());

  std::vector<double> delta(n, 1.0 / static_cast<double>(n));
  if (problem.ratio_terms.empty()) {
    // Every channel is constant on all adjacent rows: level 0 everywhere.
    return {Distribution::Create(game.defender_actions(), delta), 0.0, 0, 0.0, true, attacker};
  }

  // Terms whose channels all vanish on the support of delta evaluate to 0 in
  // F and pin the LP minimum at 0 on whole faces, so F_k = 0 neither proves
  // optimality nor guarantees progress. Dinkelbach steps are taken while the
  // largest ratio keeps dropping; otherwise the interval [lower, best] is
  // bisected in log space with the LP as a feasibility oracle. Every pair
  // has a ratio of at least 1, so lower starts at 1.
  double best = MaxRatio(problem.ratio_terms, delta);
  double lower = 1.0;
  double upper = best;
  double last_gap = 0.0;
  bool dinkelbach = true;
  std::int64_t k = 0;
  auto converged = [&] { return std::log(best) - std::log(lower) <= options.tolerance; };
  while (!converged() && k < options.max_iter) {
    ++k;
    const double target = dinkelbach ? best : std::sqrt(lower * upper);
    problem.lambda = target;
    const LpResult step = SolveLp(problem);
    const double ratio = MaxRatio(problem.ratio_terms, step.delta);
    const bool improved = ratio < best * (1.0 - kRelativeProgress);
    if (improved) {
      best = ratio;
      delta = step.delta;
      upper = std::min(upper, best);
    }
    if (dinkelbach) {
      last_gap = step.z;
      if (trace != nullptr) trace->push_back({target, step.z, step.delta});
      dinkelbach = improved;
      continue;
    }
    if (step.z <= kFeasibilityTolerance) {
      upper = std::min(upper, target);
      dinkelbach = improved;
    } else {
      lower = target;
    }
  }
  const bool certified = converged();
  return {Distribution::Create(game.defender_actions(), delta),
          std::log(best),
          k,
          certified ? std::log(best) - std::log(lower) : std::abs(last_gap),
          certified,
          attacker};
}

SolveReport SolveDpVisible(const GameSpec& game) {
  const DpMeasure& m = game.dp();
  std::size_t best_d = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < game.num_defender_actions(); ++d) {
    double worst = 0.0;
    for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
      worst = std::max(worst, DpLevelOf(game.channel(d, a), m.adjacency).value());
    }
    if (d == 0 || worst < best_value - kTieTolerance) {
      best_value = worst;
      best_d = d;
    }
  }
  return {Distribution::Point(game.defender_actions(), best_d), best_value, 1, 0.0, true,
          Uniform(game.attacker_actions())};
}

}  // namespace leakgame
