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

// Ready-made games: the two-millionaires and binary-sum QIF games, a
// two-action DP example, local-DP randomized-response design over COMPAS
// attribute correlations, and Crowds on an ad-hoc network.

#ifndef LEAKGAME_SCENARIOS_H_
#define LEAKGAME_SCENARIOS_H_

#include <string>
#include <utility>
#include <vector>

#include "leakgame/core.h"

namespace leakgame {

GameSpec BuildTwoMillionaires();
GameSpec BuildBinarySum();
GameSpec BuildDpExample();

// Square channel over `domain`: e^eps / (k + e^eps - 1) on the diagonal and
// 1 / (k + e^eps - 1) elsewhere, k = |domain|.
Channel RandomizedResponse(double eps, const Labels& domain);

// Conditional distribution p(z | x) of one public attribute given the secret.
class CorrelationTable {
 public:
  // Rows must sum to 1 within 1e-3 and are then renormalized exactly. A
  // message is appended to `warnings` for each row that needed rescaling by
  // more than kStochasticTolerance.
  static CorrelationTable Create(std::string name, Labels secrets, Labels attribute_values,
                                 const std::vector<std::vector<double>>& rows,
                                 std::vector<std::string>* warnings = nullptr);

  const std::string& name() const { return name_; }
  const Labels& secrets() const { return secrets_; }
  const Labels& attribute_values() const { return attribute_values_; }
  const Eigen::MatrixXd& rows() const { return rows_; }

  // The table as a channel whose outputs are tagged "<name>:<value>".
  Channel AsChannel() const;

 private:
  CorrelationTable(std::string name, Labels secrets, Labels values, Eigen::MatrixXd rows)
      : name_(std::move(name)),
        secrets_(std::move(secrets)),
        attribute_values_(std::move(values)),
        rows_(std::move(rows)) {}

  std::string name_;
  Labels secrets_;
  Labels attribute_values_;
  Eigen::MatrixXd rows_;
};

// Ethnicity, gender, language and marital-status tables given the agency
// attribute, rounded to four decimals as published. Rows whose rounding
// leaves them off one are renormalized and reported in `warnings`.
std::vector<CorrelationTable> CompasTables(std::vector<std::string>* warnings = nullptr);

// Game with one action per table on each side. Channel (d, a) cascades
// table a with randomized response on its attribute, using eps_strong when
// d == a and eps_weak otherwise. Adjacency is all-pairs over the secrets.
GameSpec BuildLdpGame(const std::vector<CorrelationTable>& tables, double eps_strong = 0.1,
                      double eps_weak = 2.0);

struct CrowdsSite {
  std::string label;
  // Honest nodes within communication range of the site.
  std::vector<std::string> neighbors;
};

struct CrowdsConfig {
  Labels nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  double forward_prob = 0.8;
  std::vector<CrowdsSite> attacker_sites;
  std::vector<CrowdsSite> defender_sites;
};

// Output label for detection of `node`, and the no-detection label.
std::string CrowdsDetectionLabel(const std::string& node);
inline constexpr const char* kCrowdsNoDetection = "none";

// Throws on malformed configurations. Connectivity is required of the graph
// on honest nodes plus every site that has at least one edge.
void ValidateCrowdsConfig(const CrowdsConfig& config);

// Channel from initiator to first detected forwarder with a deliverer at
// `deliverer` and the corrupted node at `corrupted`.
Channel CrowdsChannel(const CrowdsConfig& config, const CrowdsSite& deliverer,
                      const CrowdsSite& corrupted);

// D = defender sites, A = attacker sites, uniform prior, Bayes gain.
GameSpec BuildCrowds(const CrowdsConfig& config);

}  // namespace leakgame

#endif  // LEAKGAME_SCENARIOS_H_
