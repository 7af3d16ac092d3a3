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

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "leakgame/algebra.h"

namespace leakgame {

namespace {

const Labels kBinary = {"0", "1"};

QifMeasure UniformBayes(const Labels& secrets) {
  return QifMeasure{Uniform(secrets), GainFunction::Bayes(secrets)};
}

// Tolerance on published row sums before renormalization.
constexpr double kTableRowTolerance = 1e-3;

}  // namespace

GameSpec BuildTwoMillionaires() {
  const Labels y = {"T", "F"};
  std::vector<Channel> channels = {
      Channel::FromRows(kBinary, y, {{1, 0}, {0, 1}}),  // d=0 (x <= a), a=0
      Channel::FromRows(kBinary, y, {{1, 0}, {1, 0}}),  // d=0, a=1
      Channel::FromRows(kBinary, y, {{1, 0}, {1, 0}}),  // d=1 (x >= a), a=0
      Channel::FromRows(kBinary, y, {{0, 1}, {1, 0}}),  // d=1, a=1
  };
  return GameSpec::Create(kBinary, kBinary, std::move(channels), UniformBayes(kBinary));
}

GameSpec BuildBinarySum() {
  const Channel same = Channel::FromRows(kBinary, kBinary, {{1, 0}, {0, 1}});
  const Channel flip = Channel::FromRows(kBinary, kBinary, {{0, 1}, {1, 0}});
  return GameSpec::Create(kBinary, kBinary, {same, flip, flip, same}, UniformBayes(kBinary));
}

GameSpec BuildDpExample() {
  const Labels x = {"x0", "x1"};
  const Labels y = {"y0", "y1"};
  const Channel shared = Channel::FromRows(x, y, {{0.01, 0.99}, {0.03, 0.97}});
  std::vector<Channel> channels = {
      Channel::FromRows(x, y, {{0.9, 0.1}, {0.1, 0.9}}),
      shared,
      shared,
      Channel::FromRows(x, y, {{0.9, 0.1}, {0.3, 0.7}}),
  };
  return GameSpec::Create(kBinary, kBinary, std::move(channels),
                          DpMeasure{AdjacencyRelation::AllPairs()});
}

Channel RandomizedResponse(double eps, const Labels& domain) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kNegativeEpsilon, "randomized response needs a finite eps >= 0");
  }
  if (domain.size() < 2) {
    throw Error(ErrorCode::kDomainTooSmall, "randomized response needs at least two values");
  }
  const auto k = static_cast<Eigen::Index>(domain.size());
  const double boost = std::exp(eps);
  const double denom = static_cast<double>(k) + boost - 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, 1.0 / denom);
  m.diagonal().setConstant(boost / denom);
  return Channel::FromMatrix(domain, domain, std::move(m));
}

CorrelationTable CorrelationTable::Create(std::string name, Labels secrets,
                                          Labels attribute_values,
                                          const std::vector<std::vector<double>>& rows,
                                          std::vector<std::string>* warnings) {
  if (secrets.empty() || attribute_values.empty()) {
    throw Error(ErrorCode::kEmptyDomain, "correlation table " + name + " has an empty axis");
  }
  if (rows.size() != secrets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "correlation table " + name + " row count differs");
  }
  const auto nx = static_cast<Eigen::Index>(secrets.size());
  const auto nz = static_cast<Eigen::Index>(attribute_values.size());
  Eigen::MatrixXd m(nx, nz);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != nz) {
      throw Error(ErrorCode::kShapeMismatch, "correlation table " + name + " row width differs");
    }
    double sum = 0.0;
    for (Eigen::Index j = 0; j < nz; ++j) {
      const double v = row[static_cast<std::size_t>(j)];
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::kNegativeEntry,
                    "correlation table " + name + " has a negative or non-finite entry");
      }
      m(i, j) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kTableRowTolerance) {
      throw Error(ErrorCode::kNonStochastic,
                  "correlation table " + name + " row " + secrets[static_cast<std::size_t>(i)] +
                      " sums to " + std::to_string(sum));
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance && warnings != nullptr) {
      std::ostringstream msg;
      msg << "correlation table " << name << " row " << secrets[static_cast<std::size_t>(i)]
          << " sums to " << sum << "; renormalized";
      warnings->push_back(msg.str());
    }
    m.row(i) /= sum;
  }
  // Validates labels as a side effect.
  Channel::FromMatrix(secrets, attribute_values, m);
  return CorrelationTable(std::move(name), std::move(secrets), std::move(attribute_values),
                          std::move(m));
}

Channel CorrelationTable::AsChannel() const {
  Labels tagged;
  tagged.reserve(attribute_values_.size());
  for (const auto& v : attribute_values_) tagged.push_back(name_ + ":" + v);
  return Channel::FromMatrix(secrets_, tagged, rows_);
}

std::vector<CorrelationTable> CompasTables(std::vector<std::string>* warnings) {
  const Labels agency = {"BC", "DRRD", "Pretrial", "Probation"};
  std::vector<CorrelationTable> tables;
  tables.push_back(CorrelationTable::Create(
      "ethnicity", agency,
      {"African", "Caucasian", "Hispanic", "Other", "Arabic", "Native", "Asian", "Oriental"},
      {{0.5366, 0.3171, 0.1463, 0, 0, 0, 0, 0},
       {0.7234, 0.1436, 0.0957, 0.0266, 0.0053, 0.0053, 0, 0},
       {0.4956, 0.3509, 0.0909, 0.0545, 0.0009, 0.0034, 0.0032, 0.0004},
       {0.3267, 0.3799, 0.2590, 0.0176, 0.0017, 0.0039, 0.0101, 0.0011}}, warnings));
  tables.push_back(CorrelationTable::Create("gender", agency, {"Male", "Female"},
                                            {{0.731707, 0.268293},
                                             {0.87234, 0.12766},
                                             {0.802482, 0.197518},
                                             {0.732053, 0.267947}},
                                            warnings));
  tables.push_back(CorrelationTable::Create(
      "language", agency, {"English", "Spanish"},
      {{1.0, 0.0}, {1.0, 0.0}, {0.9969, 0.0031}, {0.9935, 0.0065}}, warnings));
  tables.push_back(CorrelationTable::Create(
      "marital", agency,
      {"Single", "Married", "Divorced", "Separated", "Widowed", "Other", "Unknown"},
      {{0.9268, 0.0000, 0.0488, 0.0244, 0.0000, 0.0000, 0.0000},
       {0.9149, 0.0479, 0.0106, 0.0053, 0.0053, 0.0160, 0.0000},
       {0.7664, 0.1201, 0.0482, 0.0258, 0.0050, 0.0295, 0.0050},
       {0.6820, 0.1685, 0.0990, 0.0387, 0.0094, 0.0020, 0.0003}},
      warnings));
  return tables;
}

GameSpec BuildLdpGame(const std::vector<CorrelationTable>& tables, double eps_strong,
                      double eps_weak) {
  if (tables.empty()) throw Error(ErrorCode::kEmptyDomain, "no correlation tables");
  for (const auto& t : tables) {
    if (t.secrets() != tables.front().secrets()) {
      throw Error(ErrorCode::kInconsistentSecrets,
                  "table " + t.name() + " has different secrets from " + tables.front().name());
    }
  }
  Labels actions;
  for (std::size_t i = 0; i < tables.size(); ++i) actions.push_back(std::to_string(i + 1));

  std::vector<Channel> correlations;
  for (const auto& t : tables) correlations.push_back(t.AsChannel());

  std::vector<Channel> channels;
  channels.reserve(tables.size() * tables.size());
  for (std::size_t d = 0; d < tables.size(); ++d) {
    for (std::size_t a = 0; a < tables.size(); ++a) {
      const Channel& corr = correlations[a];
      const Channel rr = RandomizedResponse(d == a ? eps_strong : eps_weak, corr.outputs());
      channels.push_back(Cascade(corr, rr));
    }
  }
  return GameSpec::Create(actions, actions, std::move(channels),
                          DpMeasure{AdjacencyRelation::AllPairs()});
}

std::string CrowdsDetectionLabel(const std::string& node) { return "det:" + node; }

namespace {

std::map<std::string, std::size_t> NodeIndex(const CrowdsConfig& config) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    if (!index.emplace(config.nodes[i], i).second) {
      throw Error(ErrorCode::kDuplicateLabel, "duplicate Crowds node " + config.nodes[i]);
    }
  }
  return index;
}

std::size_t Lookup(const std::map<std::string, std::size_t>& index, const std::string& node) {
  const auto it = index.find(node);
  if (it == index.end()) throw Error(ErrorCode::kLabelMismatch, "unknown Crowds node " + node);
  return it->second;
}

// Marks the honest neighbours of a site; rejects unknown or repeated nodes.
std::vector<bool> SiteMask(const std::map<std::string, std::size_t>& index,
                           const CrowdsSite& site) {
  std::vector<bool> mask(index.size(), false);
  for (const auto& v : site.neighbors) {
    const std::size_t i = Lookup(index, v);
    if (mask[i]) {
      throw Error(ErrorCode::kDuplicateLabel, "site " + site.label + " lists " + v + " twice");
    }
    mask[i] = true;
  }
  return mask;
}

std::vector<std::vector<std::size_t>> HonestAdjacency(
    const CrowdsConfig& config, const std::map<std::string, std::size_t>& index) {
  std::vector<std::vector<std::size_t>> adj(config.nodes.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [u, v] : config.edges) {
    std::size_t i = Lookup(index, u);
    std::size_t j = Lookup(index, v);
    if (i == j) throw Error(ErrorCode::kInvalidArgument, "self-loop at Crowds node " + u);
    if (i > j) std::swap(i, j);
    if (!seen.emplace(i, j).second) continue;
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

void CheckSiteLabels(const std::vector<CrowdsSite>& sites, const char* role) {
  if (sites.empty()) throw Error(ErrorCode::kEmptyDomain, std::string("no ") + role + " sites");
  std::set<std::string> labels;
  for (const auto& s : sites) {
    if (!labels.insert(s.label).second) {
      throw Error(ErrorCode::kDuplicateLabel, std::string("duplicate ") + role + " site " + s.label);
    }
  }
}

}  // namespace

void ValidateCrowdsConfig(const CrowdsConfig& config) {
  if (!(config.forward_prob > 0.0 && config.forward_prob < 1.0)) {
    throw Error(ErrorCode::kInvalidForwardProbability, "forward probability must lie in (0, 1)");
  }
  if (config.nodes.empty()) throw Error(ErrorCode::kEmptyDomain, "no Crowds nodes");
  const auto index = NodeIndex(config);
  const auto adj = HonestAdjacency(config, index);
  CheckSiteLabels(config.attacker_sites, "attacker");
  CheckSiteLabels(config.defender_sites, "defender");

  // Union graph: honest nodes 0..n-1, then one vertex per site with edges.
  const std::size_t n = config.nodes.size();
  std::vector<std::vector<std::size_t>> graph(adj);
  for (const auto* sites : {&config.attacker_sites, &config.defender_sites}) {
    for (const auto& site : *sites) {
      const std::vector<bool> mask = SiteMask(index, site);
      if (site.neighbors.empty()) continue;
      const std::size_t v = graph.size();
      graph.emplace_back();
      for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        graph[v].push_back(i);
        graph[i].push_back(v);
      }
    }
  }
  std::vector<bool> reached(graph.size(), false);
  std::vector<std::size_t> stack = {0};
  reached[0] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : graph[u]) {
      if (!reached[w]) {
        reached[w] = true;
        stack.push_back(w);
      }
    }
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!reached[i]) {
      throw Error(ErrorCode::kDisconnectedGraph,
                  i < n ? "Crowds node " + config.nodes[i] + " is unreachable"
                        : std::string("a Crowds site is unreachable"));
    }
  }
}

Channel CrowdsChannel(const CrowdsConfig& config, const CrowdsSite& deliverer,
                      const CrowdsSite& corrupted) {
  const auto index = NodeIndex(config);
  const auto adj = HonestAdjacency(config, index);
  const std::vector<bool> at_deliverer = SiteMask(index, deliverer);
  const std::vector<bool> at_corrupted = SiteMask(index, corrupted);
  const double pf = config.forward_prob;
  if (!(pf > 0.0 && pf < 1.0)) {
    throw Error(ErrorCode::kInvalidForwardProbability, "forward probability must lie in (0, 1)");
  }
  const auto n = static_cast<Eigen::Index>(config.nodes.size());

  // State i: node i holds the message and forwards it to a uniform neighbour.
  // X(i, .) = B(i, .) + pf * sum_j P(i, j) X(j, .), where an honest receiver
  // j forwards again with probability pf and delivers otherwise.
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd absorb = Eigen::MatrixXd::Zero(n, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double honest = static_cast<double>(adj[iu].size());
    const double deg = honest + (at_corrupted[iu] ? 1.0 : 0.0) + (at_deliverer[iu] ? 1.0 : 0.0);
    if (deg == 0.0) {
      throw Error(ErrorCode::kDisconnectedGraph,
                  "Crowds node " + config.nodes[iu] + " has no neighbour when the deliverer is at " +
                      deliverer.label + " and the corrupted node at " + corrupted.label);
    }
    for (std::size_t j : adj[iu]) system(i, static_cast<Eigen::Index>(j)) -= pf / deg;
    if (at_corrupted[iu]) absorb(i, i) = 1.0 / deg;
    absorb(i, n) = ((at_deliverer[iu] ? 1.0 : 0.0) + (1.0 - pf) * honest) / deg;
  }
  Eigen::MatrixXd x = system.partialPivLu().solve(absorb);
  if (!x.allFinite()) {
    throw Error(ErrorCode::kNumericalFailure, "Crowds absorption system is singular");
  }
  // Clear round-off so rows are exactly non-negative.
  x = x.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) /= x.row(i).sum();

  Labels outputs;
  for (const auto& v : config.nodes) outputs.push_back(CrowdsDetectionLabel(v));
  outputs.emplace_back(kCrowdsNoDetection);
  return Channel::FromMatrix(config.nodes, outputs, std::move(x));
}

GameSpec BuildCrowds(const CrowdsConfig& config) {
  ValidateCrowdsConfig(config);
  Labels defender;
  Labels attacker;
  for (const auto& s : config.defender_sites) defender.push_back(s.label);
  for (const auto& s : config.attacker_sites) attacker.push_back(s.label);
  std::vector<Channel> channels;
  channels.reserve(defender.size() * attacker.size());
  for (const auto& d : config.defender_sites) {
    for (const auto& a : config.attacker_sites) channels.push_back(CrowdsChannel(config, d, a));
  }
  return GameSpec::Create(defender, attacker, std::move(channels), UniformBayes(config.nodes));
}

}  // namespace leakgame
