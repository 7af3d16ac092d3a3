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

// Randomized structural properties shared by the property tests and the
// acceptance binary. Each runner draws its instances from its own seed and
// reports how many of them violated the property.

#ifndef LEAKGAME_TESTS_THEOREM_SUITE_H_
#define LEAKGAME_TESTS_THEOREM_SUITE_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "leakgame/algebra.h"
#include "leakgame/audits.h"
#include "leakgame/dp_solver.h"
#include "leakgame/measures.h"
#include "leakgame/qif_solver.h"
#include "test_util.h"

namespace leakgame::testing {

struct PropertyOutcome {
  std::string name;
  int instances = 0;
  int violations = 0;
  std::string first_failure;

  void Record(bool ok, const std::string& what) {
    ++instances;
    if (ok) return;
    if (violations++ == 0) first_failure = what;
  }
  bool ok() const { return violations == 0 && instances > 0; }
};

inline std::string Describe(int i, double lhs, double rhs) {
  std::ostringstream s;
  s.precision(17);
  s << "instance " << i << ": " << lhs << " vs " << rhs;
  return s.str();
}

inline Labels Indices(std::size_t n) { return MakeLabels("i", n); }

// Posterior vulnerability of a hidden choice is at most the mixture of the
// operands' posterior vulnerabilities.
inline PropertyOutcome ConvexityOfHiddenChoice(std::uint64_t seed, int n) {
  PropertyOutcome out{"convexity of posterior vulnerability under hidden choice"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = 2 + gen.Index(3);
    const Labels x = MakeLabels("x", 2 + gen.Index(3));
    const Labels y = MakeLabels("y", 2 + gen.Index(3));
    std::vector<Channel> cs;
    for (std::size_t j = 0; j < k; ++j) cs.push_back(gen.RandomChannel(x, y, true));
    const MixedStrategy mu = gen.Dist(Indices(k), true);
    const Prior pi = gen.Dist(x);
    const GainFunction g = GainFunction::Bayes(x);
    const double lhs = PosteriorVulnerability(g, pi, HiddenChoice(mu, cs));
    double rhs = 0.0;
    for (std::size_t j = 0; j < k; ++j) rhs += mu[j] * PosteriorVulnerability(g, pi, cs[j]);
    out.Record(lhs <= rhs + 1e-9, Describe(i, lhs, rhs));
  }
  return out;
}

inline double MaxLevelOnSupport(const MixedStrategy& mu, const std::vector<Channel>& cs) {
  double m = 0.0;
  for (std::size_t j : mu.Support()) {
    m = std::max(m, DpLevelOf(cs[j], AdjacencyRelation::AllPairs()).value());
  }
  return m;
}

inline PropertyOutcome QuasiConvexityOfHiddenChoice(std::uint64_t seed, int n) {
  PropertyOutcome out{"dp level quasi-convex under hidden choice"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = 2 + gen.Index(3);
    const Labels x = MakeLabels("x", 2 + gen.Index(3));
    const Labels y = MakeLabels("y", 2 + gen.Index(3));
    std::vector<Channel> cs;
    for (std::size_t j = 0; j < k; ++j) cs.push_back(gen.RandomChannel(x, y, true));
    const MixedStrategy mu = gen.Dist(Indices(k), true);
    const double lhs = DpLevelOf(HiddenChoice(mu, cs), AdjacencyRelation::AllPairs()).value();
    const double rhs = MaxLevelOnSupport(mu, cs);
    out.Record(lhs <= rhs + 1e-9, Describe(i, lhs, rhs));
  }
  return out;
}

inline PropertyOutcome QuasiMaxOfVisibleChoice(std::uint64_t seed, int n) {
  PropertyOutcome out{"dp level quasi-max under visible choice"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = 2 + gen.Index(3);
    const Labels x = MakeLabels("x", 2 + gen.Index(3));
    std::vector<Channel> cs;
    for (std::size_t j = 0; j < k; ++j) {
      cs.push_back(gen.RandomChannel(x, MakeLabels("y", 2 + gen.Index(3)), true));
    }
    const MixedStrategy mu = gen.Dist(Indices(k), true);
    const double lhs = DpLevelOf(VisibleChoice(mu, cs), AdjacencyRelation::AllPairs()).value();
    const double rhs = MaxLevelOnSupport(mu, cs);
    out.Record(std::abs(lhs - rhs) <= 1e-12, Describe(i, lhs, rhs));
  }
  return out;
}

inline PropertyOutcome HiddenBelowPureBound(std::uint64_t seed, int n) {
  PropertyOutcome out{"hidden-choice utility below the max over supports"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const GameSpec g = gen.RandomDpGame(2 + gen.Index(3), 1 + gen.Index(3), 2 + gen.Index(2), 3);
    const MixedStrategy delta = gen.Dist(g.defender_actions(), true);
    const MixedStrategy alpha = gen.Dist(g.attacker_actions(), true);
    const double lhs = DpUtilityHidden(g, delta, alpha).value();
    const double rhs = HiddenUpperBound(g, delta, alpha).value();
    out.Record(lhs <= rhs + 1e-9, Describe(i, lhs, rhs));
  }
  return out;
}

inline PropertyOutcome VisibleNotBelowHidden(std::uint64_t seed, int n) {
  PropertyOutcome out{"visible-choice equilibrium not below hidden-choice equilibrium"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const GameSpec g = gen.RandomDpGame(2 + gen.Index(3), 1 + gen.Index(3), 2 + gen.Index(2), 3);
    const double hidden = SolveDpHidden(g).value;
    const double visible = SolveDpVisible(g).value;
    out.Record(visible >= hidden - 1e-6, Describe(i, visible, hidden));
  }
  return out;
}

inline PropertyOutcome FullSupportAttackerDominates(std::uint64_t seed, int n) {
  PropertyOutcome out{"full-support attacker strategy is optimal"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const GameSpec g = gen.RandomDpGame(2 + gen.Index(3), 2 + gen.Index(3), 2 + gen.Index(2), 3);
    const MixedStrategy delta = gen.Dist(g.defender_actions(), true);
    const double full = DpUtilityHidden(g, delta, Uniform(g.attacker_actions())).value();
    const double other =
        DpUtilityHidden(g, delta, gen.Dist(g.attacker_actions(), true)).value();
    out.Record(full >= other - 1e-12, Describe(i, full, other));
  }
  return out;
}

inline PropertyOutcome SubgradientInequality(std::uint64_t seed, int n) {
  PropertyOutcome out{"subgradient inequality of the QIF objective"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const GameSpec g =
        gen.RandomQifGame(2 + gen.Index(3), 1 + gen.Index(3), 2 + gen.Index(3), 2 + gen.Index(3),
                          gen.Coin());
    const MixedStrategy d1 = gen.Dist(g.defender_actions(), true);
    const MixedStrategy d2 = gen.Dist(g.defender_actions(), true);
    const std::vector<double> h = Subgradient(g, d1);
    double rhs = FValueAt(g, d1).value;
    for (std::size_t d = 0; d < h.size(); ++d) rhs += h[d] * (d2[d] - d1[d]);
    const double lhs = FValueAt(g, d2).value;
    out.Record(lhs >= rhs - 1e-9, Describe(i, lhs, rhs));
  }
  return out;
}

// The projection is no farther from v than any lattice point of the simplex.
inline PropertyOutcome ProjectionBeatsGrid(std::uint64_t seed, int n) {
  PropertyOutcome out{"simplex projection optimal against a grid"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const std::size_t dim = 2 + gen.Index(2);
    std::vector<double> v(dim);
    for (auto& c : v) c = gen.Uniform(-1.5, 1.5);
    const std::vector<double> p = ProjectOntoSimplex(v);
    auto dist2 = [&](std::span<const double> q) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += (v[j] - q[j]) * (v[j] - q[j]);
      return s;
    };
    const double mine = dist2(p);
    double best = std::numeric_limits<double>::infinity();
    ForEachSimplexGridPoint(dim, 0.01, [&](std::span<const double> q) { best = std::min(best, dist2(q)); });
    double sum = 0.0;
    for (double c : p) sum += c;
    const bool feasible = std::abs(sum - 1.0) <= 1e-12 && *std::min_element(p.begin(), p.end()) >= 0.0;
    out.Record(feasible && mine <= best + 1e-12, Describe(i, mine, best));
  }
  return out;
}

// Appendix correspondence, direction (1): an eps-LDP channel bounds every
// prior-to-posterior ratio by e^eps.
inline PropertyOutcome LevelBoundsPosteriorRatios(std::uint64_t seed, int n) {
  PropertyOutcome out{"local DP level bounds prior-to-posterior ratios"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const Labels x = MakeLabels("x", 2 + gen.Index(3));
    const Channel c = gen.RandomChannel(x, MakeLabels("y", 2 + gen.Index(3)), true);
    const auto priors = SampleDirichletPriors(x, 20, seed + static_cast<std::uint64_t>(i));
    const double eps = DpLevelOf(c, AdjacencyRelation::AllPairs()).value();
    const InfoIncreaseReport r =
        CheckInfoIncreaseBounds(c, AdjacencyRelation::AllPairs(), priors, eps);
    const BayesBoundReport b = CheckBayesHypothesisBound(c, AdjacencyRelation::AllPairs(), priors);
    out.Record(r.direction1_applicable && r.ok() && b.ok() && r.observed_alpha <= eps + 1e-12,
               Describe(i, r.observed_alpha, eps));
  }
  return out;
}

// Direction (2): ratios bounded by e^alpha imply a level of at most 2 alpha.
inline PropertyOutcome PosteriorRatiosBoundLevel(std::uint64_t seed, int n) {
  PropertyOutcome out{"bounded prior-to-posterior ratios imply twice the level"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const Labels x = MakeLabels("x", 2 + gen.Index(3));
    const Channel c = gen.RandomChannel(x, MakeLabels("y", 2 + gen.Index(3)), true);
    const auto priors = SampleDirichletPriors(x, 20, seed + static_cast<std::uint64_t>(i));
    const double alpha =
        CheckInfoIncreaseBounds(c, AdjacencyRelation::AllPairs(), priors, 0.0).observed_alpha;
    const InfoIncreaseReport r =
        CheckInfoIncreaseBounds(c, AdjacencyRelation::AllPairs(), priors, alpha);
    out.Record(r.direction2_applicable && r.ok() &&
                   CheckDp(c, AdjacencyRelation::AllPairs(), 2.0 * alpha),
               Describe(i, r.epsilon, 2.0 * alpha));
  }
  return out;
}

inline std::vector<PropertyOutcome> RunTheoremSuite(std::uint64_t seed, int n) {
  return {ConvexityOfHiddenChoice(seed + 1, n),   QuasiConvexityOfHiddenChoice(seed + 2, n),
          QuasiMaxOfVisibleChoice(seed + 3, n),   HiddenBelowPureBound(seed + 4, n),
          VisibleNotBelowHidden(seed + 5, n),     FullSupportAttackerDominates(seed + 6, n),
          SubgradientInequality(seed + 7, n),     ProjectionBeatsGrid(seed + 8, n),
          LevelBoundsPosteriorRatios(seed + 9, n), PosteriorRatiosBoundLevel(seed + 10, n)};
}

// Solver against grid oracle on random games with two actions per side.
inline PropertyOutcome QifOracleAgreement(std::uint64_t seed, int n, double* worst_gap = nullptr) {
  PropertyOutcome out{"QIF solver agrees with grid oracle"};
  Gen gen(seed);
  const QifSolverOptions opts;
  for (int i = 0; i < n; ++i) {
    const GameSpec g = gen.RandomQifGame(2, 2, 2 + gen.Index(3), 2 + gen.Index(3), gen.Coin());
    const SolveReport r = SolveQif(g, opts);
    const GridOptimum o = BruteForceQif(g, 1e-3);
    const double gap = std::abs(r.value - o.value);
    if (worst_gap) *worst_gap = std::max(*worst_gap, gap);
    out.Record(gap <= opts.tolerance + o.slack, Describe(i, gap, opts.tolerance + o.slack));
  }
  return out;
}

inline PropertyOutcome DpOracleAgreement(std::uint64_t seed, int n, double* worst_gap = nullptr) {
  PropertyOutcome out{"DP hidden solver agrees with grid oracle"};
  Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const GameSpec g = gen.RandomDpGame(2, 2, 2 + gen.Index(3), 2 + gen.Index(3));
    const SolveReport r = SolveDpHidden(g);
    const GridOptimum o = BruteForceDpHidden(g, 1e-3);
    const double gap = std::abs(r.value - o.value);
    if (worst_gap) *worst_gap = std::max(*worst_gap, gap);
    out.Record(gap <= 1e-6 + o.slack, Describe(i, gap, 1e-6 + o.slack));
  }
  return out;
}

}  // namespace leakgame::testing

#endif  // LEAKGAME_TESTS_THEOREM_SUITE_H_
