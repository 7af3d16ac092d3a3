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

#include "leakgame/scenarios.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "leakgame/io.h"
#include "leakgame/measures.h"
#include "leakgame/qif_solver.h"
#include "test_util.h"

namespace leakgame {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no leakgame::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(FixedGamesTest, TwoMillionaires) {
  const GameSpec g = BuildTwoMillionaires();
  const double want[2][2] = {{1.0, 0.5}, {0.5, 1.0}};
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_DOUBLE_EQ(BayesPosterior(g.qif().prior, g.channel(d, a)), want[d][a]);
    }
  }
  EXPECT_EQ(g.channel(0, 1).Rows(), (std::vector<std::vector<double>>{{1, 0}, {1, 0}}));
}

TEST(FixedGamesTest, BinarySum) {
  const GameSpec g = BuildBinarySum();
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_DOUBLE_EQ(BayesPosterior(g.qif().prior, g.channel(d, a)), 1.0);
    }
  }
  EXPECT_EQ(g.channel(1, 0).Rows(), (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
  EXPECT_NEAR(FValueAt(g, Uniform(g.defender_actions())).value, 0.5, 1e-15);
}

TEST(FixedGamesTest, DpExample) {
  const GameSpec g = BuildDpExample();
  const auto all = AdjacencyRelation::AllPairs();
  EXPECT_NEAR(DpLevelOf(g.channel(0, 0), all).value(), 2.197, 5e-4);
  EXPECT_NEAR(DpLevelOf(g.channel(0, 1), all).value(), 1.099, 5e-4);
  EXPECT_EQ(g.channel(0, 1).matrix(), g.channel(1, 0).matrix());
  EXPECT_NEAR(DpLevelOf(g.channel(1, 1), all).value(), 1.95, 5e-3);
}

TEST(RandomizedResponseTest, ClosedForms) {
  const Channel rr = RandomizedResponse(std::log(3.0), {"a", "b"});
  EXPECT_NEAR(rr(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(rr(0, 1), 0.25, 1e-15);
  const Channel flat = RandomizedResponse(0.0, {"a", "b", "c"});
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(flat(i, j), 1.0 / 3.0, 1e-15);
  }
  const Channel eight = RandomizedResponse(2.0, testing::MakeLabels("z", 8));
  EXPECT_NEAR(eight(3, 3), std::exp(2.0) / (7.0 + std::exp(2.0)), 1e-15);
}

TEST(RandomizedResponseTest, LevelEqualsEpsilon) {
  for (double eps : {0.0, 0.1, 1.0, 2.0, std::log(3.0)}) {
    for (std::size_t k = 2; k <= 8; ++k) {
      const Channel rr = RandomizedResponse(eps, testing::MakeLabels("z", k));
      EXPECT_NEAR(DpLevelOf(rr, AdjacencyRelation::AllPairs()).value(), eps, 1e-12);
    }
  }
}

TEST(RandomizedResponseTest, Errors) {
  EXPECT_EQ(CodeOf([] { RandomizedResponse(-0.5, {"a", "b"}); }), ErrorCode::kNegativeEpsilon);
  EXPECT_EQ(CodeOf([] { RandomizedResponse(1.0, {"a"}); }), ErrorCode::kDomainTooSmall);
}

TEST(CompasTest, TableEntries) {
  const GameSpec g = BuildLdpGame(CompasTables(), 0.1, 2.0);
  const double want[4][4] = {{0.0395, 0.4020, 0.0404, 0.7306},
                             {0.5994, 0.0145, 0.0404, 0.7306},
                             {0.5994, 0.4020, 0.0007, 0.7306},
                             {0.5994, 0.4020, 0.0404, 0.0237}};
  for (std::size_t d = 0; d < 4; ++d) {
    for (std::size_t a = 0; a < 4; ++a) {
      EXPECT_NEAR(DpLevelOf(g.channel(d, a), AdjacencyRelation::AllPairs()).value(), want[d][a],
                  5e-3)
          << "d=" << d + 1 << " a=" << a + 1;
    }
  }
}

TEST(CompasTest, RoundedRowsWarn) {
  std::vector<std::string> warnings;
  const auto tables = CompasTables(&warnings);
  EXPECT_EQ(tables.size(), 4u);
  EXPECT_FALSE(warnings.empty());
  for (const auto& t : tables) {
    for (Eigen::Index r = 0; r < t.rows().rows(); ++r) {
      EXPECT_NEAR(t.rows().row(r).sum(), 1.0, 1e-15);
    }
  }
}

TEST(CompasTest, EqualEpsilonsMakeDefenderIrrelevant) {
  const GameSpec g = BuildLdpGame(CompasTables(), 0.7, 0.7);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t d = 1; d < 4; ++d) EXPECT_EQ(g.channel(d, a).matrix(), g.channel(0, a).matrix());
  }
}

TEST(CorrelationTableTest, Validation) {
  std::vector<std::string> warnings;
  EXPECT_EQ(CodeOf([] { CorrelationTable::Create("t", {"s"}, {"z1", "z2"}, {{0.5, 0.49}}); }),
            ErrorCode::kNonStochastic);
  const CorrelationTable t =
      CorrelationTable::Create("t", {"s"}, {"z1", "z2"}, {{0.5, 0.4995}}, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_NEAR(t.rows()(0, 0), 0.5 / 0.9995, 1e-15);
  EXPECT_EQ(t.AsChannel().outputs(), (Labels{"t:z1", "t:z2"}));
  EXPECT_EQ(CodeOf([] { CorrelationTable::Create("t", {"s"}, {"z"}, {{1.0}, {1.0}}); }),
            ErrorCode::kShapeMismatch);

  const CorrelationTable other = CorrelationTable::Create("u", {"q"}, {"z"}, {{1.0}});
  EXPECT_EQ(CodeOf([&] { BuildLdpGame({t, other}); }), ErrorCode::kInconsistentSecrets);
}

// ---- Crowds -------------------------------------------------------------

CrowdsSite Site(std::string label, std::vector<std::string> nb) {
  return CrowdsSite{std::move(label), std::move(nb)};
}

TEST(CrowdsTest, TwoNodeChainMatchesHandSolution) {
  for (double p : {0.01, 0.3, 0.8, 0.99}) {
    CrowdsConfig cfg;
    cfg.nodes = {"n1", "n2"};
    cfg.edges = {{"n1", "n2"}};
    cfg.forward_prob = p;
    const CrowdsSite corrupted = Site("c", {"n1", "n2"});
    const CrowdsSite nowhere = Site("none", {});
    const Channel c = CrowdsChannel(cfg, nowhere, corrupted);
    // Two-state chain: X1 = 1/2 [det n1] + p/2 X2 + (1-p)/2 [none], and symmetrically.
    EXPECT_NEAR(c(0, 0), 2.0 / (4 - p * p), 1e-12);
    EXPECT_NEAR(c(0, 1), p / (4 - p * p), 1e-12);
    EXPECT_NEAR(c(0, 2), (1 - p) / (2 - p), 1e-12);
    EXPECT_NEAR(c(1, 1), c(0, 0), 1e-12);
    EXPECT_NEAR(c.matrix().row(0).sum(), 1.0, 1e-12);
  }
}

TEST(CrowdsTest, CorruptedNodeWithoutEdgesSeesNothing) {
  CrowdsConfig cfg;
  cfg.nodes = {"n1", "n2", "n3"};
  cfg.edges = {{"n1", "n2"}, {"n2", "n3"}};
  cfg.defender_sites = {Site("D", {"n1"})};
  cfg.attacker_sites = {Site("A", {})};
  const GameSpec g = BuildCrowds(cfg);
  const Channel& c = g.channel(0, 0);
  const auto none = static_cast<Eigen::Index>(*IndexOf(c.outputs(), kCrowdsNoDetection));
  for (Eigen::Index x = 0; x < 3; ++x) EXPECT_NEAR(c(x, none), 1.0, 1e-12);
  EXPECT_NEAR(BayesPosterior(g.qif().prior, c), 1.0 / 3.0, 1e-12);
}

TEST(CrowdsTest, StarAroundCorruptedHub) {
  CrowdsConfig cfg;
  cfg.nodes = {"l1", "l2", "l3"};
  cfg.defender_sites = {Site("D", {})};
  cfg.attacker_sites = {Site("hub", {"l1", "l2", "l3"})};
  const GameSpec g = BuildCrowds(cfg);
  const Channel& c = g.channel(0, 0);
  for (Eigen::Index x = 0; x < 3; ++x) {
    const auto col = static_cast<Eigen::Index>(
        *IndexOf(c.outputs(), CrowdsDetectionLabel(cfg.nodes[static_cast<std::size_t>(x)])));
    EXPECT_NEAR(c(x, col), 1.0, 1e-12);
  }
}

TEST(CrowdsTest, ConfigurationErrors) {
  CrowdsConfig cfg;
  cfg.nodes = {"n1", "n2"};
  cfg.defender_sites = {Site("D", {"n1"})};
  cfg.attacker_sites = {Site("A", {"n1"})};
  EXPECT_EQ(CodeOf([&] { BuildCrowds(cfg); }), ErrorCode::kDisconnectedGraph);
  cfg.edges = {{"n1", "n2"}};
  cfg.forward_prob = 1.0;
  EXPECT_EQ(CodeOf([&] { BuildCrowds(cfg); }), ErrorCode::kInvalidForwardProbability);
  cfg.forward_prob = 0.8;
  EXPECT_NO_THROW(BuildCrowds(cfg));
  cfg.edges = {{"n1", "n9"}};
  EXPECT_EQ(CodeOf([&] { BuildCrowds(cfg); }), ErrorCode::kLabelMismatch);
  cfg.edges = {{"n1", "n2"}};
  cfg.attacker_sites = {};
  EXPECT_EQ(CodeOf([&] { BuildCrowds(cfg); }), ErrorCode::kEmptyDomain);
}

// Random connected graph on n honest nodes with up to two candidate sites.
CrowdsConfig RandomCrowds(testing::Gen& gen, std::size_t n) {
  CrowdsConfig cfg;
  cfg.nodes = testing::MakeLabels("n", n);
  for (std::size_t i = 1; i < n; ++i) cfg.edges.emplace_back(cfg.nodes[gen.Index(i)], cfg.nodes[i]);
  for (int extra = 0; extra < 2; ++extra) {
    const std::size_t i = gen.Index(n);
    const std::size_t j = gen.Index(n);
    if (i == j) continue;
    const std::pair<std::string, std::string> e{cfg.nodes[i], cfg.nodes[j]};
    const std::pair<std::string, std::string> rev{e.second, e.first};
    if (std::find(cfg.edges.begin(), cfg.edges.end(), e) == cfg.edges.end() &&
        std::find(cfg.edges.begin(), cfg.edges.end(), rev) == cfg.edges.end()) {
      cfg.edges.push_back(e);
    }
  }
  cfg.forward_prob = gen.Uniform(0.3, 0.9);
  for (const char* role : {"s1", "s2"}) {
    std::vector<std::string> nb;
    for (const auto& v : cfg.nodes) {
      if (gen.Coin(0.4)) nb.push_back(v);
    }
    if (nb.empty()) nb.push_back(cfg.nodes[gen.Index(n)]);
    cfg.attacker_sites.push_back(Site(role, nb));
    cfg.defender_sites.push_back(Site(role, nb));
  }
  return cfg;
}

TEST(CrowdsTest, RowsAreStochastic) {
  testing::Gen gen(59);
  for (int trial = 0; trial < 50; ++trial) {
    const GameSpec g = BuildCrowds(RandomCrowds(gen, 2 + gen.Index(6)));
    for (const auto& c : g.channels()) {
      EXPECT_LE((c.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9);
    }
  }
}

TEST(CrowdsTest, VulnerabilityBetweenPriorAndOne) {
  testing::Gen gen(61);
  for (int trial = 0; trial < 100; ++trial) {
    const CrowdsConfig cfg = RandomCrowds(gen, 2 + gen.Index(6));
    const Prior pi = Uniform(cfg.nodes);
    const double prior = 1.0 / static_cast<double>(cfg.nodes.size());
    for (const auto& corrupted : cfg.attacker_sites) {
      for (const auto& deliverer : cfg.defender_sites) {
        const double v = BayesPosterior(pi, CrowdsChannel(cfg, deliverer, corrupted));
        EXPECT_GE(v, prior - 1e-12) << "trial " << trial;
        EXPECT_LE(v, 1.0 + 1e-12) << "trial " << trial;
      }
    }
  }
}

// Empirical joint frequencies of (initiator, observation) against the
// analytic channel under a uniform initiator. Per-entry z-scores; with a
// few hundred entries an occasional 3-sigma excursion is expected, so the
// test bounds the excursion rate and forbids 5-sigma outliers.
TEST(CrowdsTest, ChannelMatchesMonteCarloOnSmallGraphs) {
  testing::Gen gen(67);
  constexpr int kRuns = 1000000;
  int entries = 0;
  int beyond3 = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CrowdsConfig cfg = RandomCrowds(gen, 3 + gen.Index(4));
    ValidateCrowdsConfig(cfg);
    const CrowdsSite& deliverer = cfg.defender_sites[0];
    const CrowdsSite& corrupted = cfg.attacker_sites[1];
    const Channel c = CrowdsChannel(cfg, deliverer, corrupted);
    const testing::CrowdsSimulator sim(cfg, deliverer, corrupted);
    const auto n = static_cast<Eigen::Index>(cfg.nodes.size());
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n + 1);
    for (int r = 0; r < kRuns; ++r) {
      const int init = static_cast<int>(gen.Index(static_cast<std::size_t>(n)));
      const int seen = sim.Run(init, gen.rng());
      counts(init, seen < 0 ? n : seen) += 1.0;
    }
    for (Eigen::Index x = 0; x < n; ++x) {
      for (Eigen::Index y = 0; y <= n; ++y) {
        const double p = c(x, y) / static_cast<double>(n);
        const double freq = counts(x, y) / kRuns;
        if (p == 0.0) {
          EXPECT_EQ(counts(x, y), 0.0);
          continue;
        }
        const double z = std::abs(freq - p) / std::sqrt(p * (1 - p) / kRuns);
        ++entries;
        if (z > 3.0) ++beyond3;
        worst = std::max(worst, z);
      }
    }
  }
  EXPECT_LE(beyond3, std::max(1, entries / 100)) << entries << " entries";
  EXPECT_LT(worst, 5.0);
}

TEST(CrowdsTest, ShippedTopologyBuilds) {
  const CrowdsConfig cfg =
      CrowdsConfigFromJson(ReadJson(std::string(LEAKGAME_DATA_DIR) + "/crowds_manet.json"));
  EXPECT_EQ(cfg.nodes.size(), 30u);
  EXPECT_EQ(cfg.attacker_sites.size(), 9u);
  EXPECT_EQ(cfg.defender_sites.size(), 9u);
  const GameSpec g = BuildCrowds(cfg);
  EXPECT_EQ(g.channels().size(), 81u);
  for (double w : g.qif().prior.weights()) EXPECT_DOUBLE_EQ(w, 1.0 / 30.0);
}

}  // namespace
}  // namespace leakgame
