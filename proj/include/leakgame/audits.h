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

// Executable checks: grid-search equilibrium oracles, the Bayesian reading
// of differential privacy, and the independence-axiom counterexample.

#ifndef LEAKGAME_AUDITS_H_
#define LEAKGAME_AUDITS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "leakgame/core.h"

namespace leakgame {

// Visits every point of the lattice {k / m : sum k = m} on the n-simplex,
// m = ceil(1 / step - 1e-9), vertices included.
void ForEachSimplexGridPoint(std::size_t n, double step,
                             const std::function<void(std::span<const double>)>& visit);

struct GridOptimum {
  std::vector<double> delta;
  double value = 0.0;
  // Grid spacing actually used (1 / m).
  double step = 0.0;
  // Bound on |grid value - true minimum|.
  double slack = 0.0;
};

// Grid minimizer of f(delta) = max_a V[pi, C_delta a]. Slack is the
// Lipschitz bound of f times step times (|D| - 1). Throws kTooManyActions
// for |D| > 4.
GridOptimum BruteForceQif(const GameSpec& game, double grid_step);

// Grid minimizer of max_a dp_level(C_delta a). Slack is the largest observed
// |change| between neighbouring lattice points, times (|D| - 1).
GridOptimum BruteForceDpHidden(const GameSpec& game, double grid_step);

// Dirichlet(1, ..., 1) samples; deterministic in `seed`.
std::vector<Prior> SampleDirichletPriors(const Labels& secrets, std::size_t count,
                                         std::uint64_t seed);

struct CheckReport {
  // Level of the channel in nats.
  double epsilon = 0.0;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct BayesBoundReport : CheckReport {
  // Largest [p(x|y) / p(x'|y)] / [p(x) / p(x')] over adjacent pairs.
  double max_inflation = 0.0;
  // e^epsilon - max_inflation.
  double min_slack = 0.0;
};

// Verifies p(x|y) / p(x'|y) <= e^eps p(x) / p(x') with eps the channel's own
// level, for every adjacent ordered pair, output with p(y) > 0 and prior.
BayesBoundReport CheckBayesHypothesisBound(const Channel& channel,
                                           const AdjacencyRelation& adjacency,
                                           const std::vector<Prior>& priors);

struct InfoIncreaseReport : CheckReport {
  // max |ln p(x|y) / p(x)| over the priors and outputs.
  double observed_alpha = 0.0;
  // dp level <= alpha implies every ratio lies in [e^-alpha, e^alpha].
  bool direction1_applicable = false;
  // Ratios bounded by e^alpha imply the channel is (2 alpha)-DP.
  bool direction2_applicable = false;
};

// Both directions of the correspondence between local DP and a bound on
// the multiplicative change from prior to posterior. Also checks
// dp level <= 2 * observed_alpha unconditionally.
InfoIncreaseReport CheckInfoIncreaseBounds(const Channel& channel,
                                           const AdjacencyRelation& adjacency,
                                           const std::vector<Prior>& priors, double alpha);

struct VnmWitness {
  double d = 0.0;
  // Bayes vulnerability (uniform prior) of C1, C2 and of their half-mixes
  // with C3.
  double qif_c1 = 0.0, qif_c2 = 0.0, qif_mix1 = 0.0, qif_mix2 = 0.0;
  // Levels in nats, all-pairs adjacency.
  double dp_c1 = 0.0, dp_c2 = 0.0, dp_mix1 = 0.0, dp_mix2 = 0.0;
  bool qif_reversal = false;
  bool dp_reversal = false;
};

// Builds C1 = [[1-2d, 2d], [2d, 1-2d]], C2 = [[1-d, d], [d, 1-d]] and
// C3 = [[d, 1-d], [1-d, d]]. C1 is preferred to C2 under both measures, yet
// the half-mix of C2 with C3 is preferred to that of C1 with C3. Throws
// kParameterOutOfRange unless 0 < d < 1/4, and kNumericalFailure if the
// reversal is not observed.
VnmWitness VnmIndependenceWitness(double d);

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GameAudit {
  std::vector<AuditCheck> checks;
  bool ok() const;
};

// Solver, oracle and structural checks appropriate to the game's measure.
GameAudit AuditGame(const GameSpec& game, std::uint64_t seed, std::size_t num_priors);

}  // namespace leakgame

#endif  // LEAKGAME_AUDITS_H_
