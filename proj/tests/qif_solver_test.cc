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

#include "leakgame/qif_solver.h"

#include <gtest/gtest.h>

#include <cmath>

#include "leakgame/scenarios.h"
#include "test_util.h"

namespace leakgame {
namespace {

const Labels kD = {"0", "1"};

MixedStrategy Mix(double p) { return Distribution::Create(kD, {p, 1 - p}); }

// max_a of the posterior g-vulnerability of sum_d delta(d) C_da, by loops.
double OracleF(const GameSpec& g, const std::vector<double>& delta) {
  const auto& q = g.qif();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < g.num_attacker_actions(); ++a) {
    Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(g.channel(0, a).num_inputs(),
                                                g.channel(0, a).num_outputs());
    for (std::size_t d = 0; d < delta.size(); ++d) mix += delta[d] * g.channel(d, a).matrix();
    best = std::max(best, testing::NaivePosteriorG(q.prior.weights(), mix, q.gain.table()));
  }
  return best;
}

// Minimum of OracleF over a lattice on the simplex with the given number of
// subdivisions (dimension 2 or 3).
double OracleGridMin(const GameSpec& g, int m) {
  const std::size_t n = g.num_defender_actions();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= m; ++i) {
    if (n == 2) {
      best = std::min(best, OracleF(g, {i / double(m), 1 - i / double(m)}));
      continue;
    }
    for (int j = 0; i + j <= m; ++j) {
      best = std::min(best, OracleF(g, {i / double(m), j / double(m), (m - i - j) / double(m)}));
    }
  }
  return best;
}

TEST(QifUtilityTest, TwoMillionaires) {
  const GameSpec g = BuildTwoMillionaires();
  EXPECT_DOUBLE_EQ(QifUtility(g, Distribution::Point(kD, 0), Distribution::Point(kD, 0)), 1.0);
  EXPECT_NEAR(QifUtility(g, Mix(0.5), Mix(0.5)), 0.75, 1e-15);
  for (double p : {0.1, 0.4, 0.8}) {
    for (double q : {0.0, 0.3, 1.0}) {
      EXPECT_NEAR(QifUtility(g, Mix(p), Mix(q)), q * (1 + p) / 2 + (1 - q) * (2 - p) / 2, 1e-15);
    }
  }
}

TEST(QifUtilityTest, BinarySumAtHalf) {
  const GameSpec g = BuildBinarySum();
  for (double q : {0.0, 0.25, 1.0}) EXPECT_NEAR(QifUtility(g, Mix(0.5), Mix(q)), 0.5, 1e-15);
}

TEST(FValueTest, Examples) {
  const GameSpec tm = BuildTwoMillionaires();
  FValue f = FValueAt(tm, Distribution::Point(kD, 0));
  EXPECT_DOUBLE_EQ(f.value, 1.0);
  EXPECT_EQ(f.argmax_action, 0u);
  f = FValueAt(tm, Mix(0.5));
  EXPECT_NEAR(f.value, 0.75, 1e-15);
  EXPECT_EQ(f.argmax_action, 0u);
  f = FValueAt(BuildBinarySum(), Mix(0.2));
  EXPECT_NEAR(f.value, 0.8, 1e-15);
  EXPECT_EQ(f.argmax_action, 0u);
}

TEST(SubgradientTest, EqualChannelsGiveOnes) {
  const Channel id = Channel::FromRows(kD, kD, {{1, 0}, {0, 1}});
  const GameSpec g = GameSpec::Create(kD, {"a"}, {id, id},
                                      QifMeasure{Uniform(kD), GainFunction::Bayes(kD)});
  const auto h = Subgradient(g, Mix(0.3));
  EXPECT_NEAR(h[0], 1.0, 1e-15);
  EXPECT_NEAR(h[1], 1.0, 1e-15);
}

TEST(SubgradientTest, TwoMillionairesVertex) {
  const GameSpec g = BuildTwoMillionaires();
  const auto h = Subgradient(g, Distribution::Point(kD, 0));
  EXPECT_NEAR(h[0], 1.0, 1e-15);
  EXPECT_NEAR(h[1], 0.5, 1e-15);
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    EXPECT_GE(OracleF(g, {p, 1 - p}), 1.0 + h[0] * (p - 1) + h[1] * (1 - p) - 1e-12);
  }
}

TEST(SubgradientTest, SingleDefenderAction) {
  testing::Gen gen(2);
  const GameSpec g = gen.RandomQifGame(1, 3, 3, 3);
  const auto h = Subgradient(g, Distribution::Point(g.defender_actions(), 0));
  ASSERT_EQ(h.size(), 1u);
  // f is positively homogeneous in delta, so h(1) = f(1).
  EXPECT_NEAR(h[0], OracleF(g, {1.0}), 1e-12);
}

TEST(ProjectionTest, Examples) {
  const auto keep = ProjectOntoSimplex(std::vector<double>{0.3, 0.7});
  EXPECT_NEAR(keep[0], 0.3, 1e-15);
  EXPECT_NEAR(keep[1], 0.7, 1e-15);
  EXPECT_EQ(ProjectOntoSimplex(std::vector<double>{1.2, -0.2}), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(ProjectOntoSimplex(std::vector<double>{0.6, 0.6}), (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(ProjectOntoSimplex(std::vector<double>{}), Error);
}

TEST(AttackerBestResponseTest, Examples) {
  const GameSpec tm = BuildTwoMillionaires();
  EXPECT_EQ(AttackerBestResponse(tm, Distribution::Point(kD, 0)), 0u);
  EXPECT_EQ(AttackerBestResponse(tm, Distribution::Point(kD, 1)), 1u);
  for (double p : {0.0, 0.3, 0.5, 1.0}) EXPECT_EQ(AttackerBestResponse(BuildBinarySum(), Mix(p)), 0u);
}

TEST(SolveQifTest, TwoMillionaires) {
  QifSolverOptions o;
  o.tolerance = 1e-3;
  const SolveReport r = SolveQif(BuildTwoMillionaires(), o);
  EXPECT_NEAR(r.defender_strategy[0], 0.5, 5e-3);
  EXPECT_NEAR(r.value, 0.75, 1e-3);
  EXPECT_GE(r.certificate_gap, 0.0);
}

TEST(SolveQifTest, BinarySum) {
  QifSolverOptions o;
  o.tolerance = 1e-3;
  const SolveReport r = SolveQif(BuildBinarySum(), o);
  EXPECT_NEAR(r.defender_strategy[0], 0.5, 5e-3);
  EXPECT_NEAR(r.value, 0.5, 1e-3);
}

TEST(SolveQifTest, LooseToleranceCertifies) {
  QifSolverOptions o;
  o.tolerance = 5e-3;
  const SolveReport r = SolveQif(BuildTwoMillionaires(), o);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.certificate_gap, 5e-3);
  EXPECT_LT(r.iterations, o.max_iter);
}

TEST(SolveQifTest, IterationLimitReportsUncertified) {
  QifSolverOptions o;
  o.max_iter = 10;
  const SolveReport r = SolveQif(BuildTwoMillionaires(), o);
  EXPECT_FALSE(r.certified);
  EXPECT_EQ(r.iterations, 10);
  EXPECT_GT(r.certificate_gap, o.tolerance);
}

TEST(SolveQifTest, SingleDefenderAction) {
  testing::Gen gen(4);
  const GameSpec g = gen.RandomQifGame(1, 2, 3, 2);
  const SolveReport r = SolveQif(g);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.defender_strategy.weights(), (std::vector<double>{1.0}));
  EXPECT_NEAR(r.value, OracleF(g, {1.0}), 1e-12);
}

TEST(SolveQifTest, RejectsBadOptionsAndDpGames) {
  QifSolverOptions o;
  o.tolerance = 0.0;
  EXPECT_THROW(SolveQif(BuildTwoMillionaires(), o), Error);
  o = {};
  o.max_iter = 0;
  EXPECT_THROW(SolveQif(BuildTwoMillionaires(), o), Error);
  EXPECT_THROW(SolveQif(BuildDpExample()), Error);
}

TEST(SolveQifTest, LowerBoundNeverExceedsGridMinimum) {
  testing::Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nd = 2 + gen.Index(2);
    const GameSpec g = gen.RandomQifGame(nd, 1 + gen.Index(3), 3, 3, gen.Coin());
    const double grid_min = OracleGridMin(g, nd == 2 ? 2000 : 200);
    QifSolverOptions o;
    o.max_iter = 5000;
    double worst = -std::numeric_limits<double>::infinity();
    SolveQif(g, o, [&](const DescentState& s) { worst = std::max(worst, s.best_lower); });
    EXPECT_LE(worst, grid_min + 1e-6) << "trial " << trial;
  }
}

TEST(SolveQifTest, ValueMatchesIndependentGrid) {
  testing::Gen gen(37);
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec g = gen.RandomQifGame(2, 2, 3, 3, gen.Coin());
    const SolveReport r = SolveQif(g);
    EXPECT_NEAR(r.value, OracleF(g, r.defender_strategy.weights()), 1e-12);
    const double grid_min = OracleGridMin(g, 20000);
    EXPECT_GE(r.value, grid_min - 1e-3);
    EXPECT_LE(r.value, grid_min + 1e-4 + 1e-9);
  }
}

}  // namespace
}  // namespace leakgame
