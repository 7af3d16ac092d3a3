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

#include "leakgame/core.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "leakgame/measures.h"

namespace leakgame {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonStochastic: return "NonStochastic";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kInputMismatch: return "InputMismatch";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kWeightCountMismatch: return "WeightCountMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kZeroPriorVulnerability: return "ZeroPriorVulnerability";
    case ErrorCode::kNegativeEpsilon: return "NegativeEpsilon";
    case ErrorCode::kMeasureMismatch: return "MeasureMismatch";
    case ErrorCode::kMissingChannel: return "MissingChannel";
    case ErrorCode::kNonConforming: return "NonConforming";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kDomainTooSmall: return "DomainTooSmall";
    case ErrorCode::kInconsistentSecrets: return "InconsistentSecrets";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kInvalidForwardProbability: return "InvalidForwardProbability";
    case ErrorCode::kTooManyActions: return "TooManyActions";
    case ErrorCode::kParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

std::optional<std::size_t> IndexOf(const Labels& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

namespace {

void CheckUnique(const Labels& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::kDuplicateLabel, std::string(what) + " label '" + l + "' repeated");
    }
  }
}

}  // namespace

Matrix::Matrix(Labels row_labels, Labels col_labels, Eigen::MatrixXd values)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      values_(std::move(values)) {
  if (values_.rows() != static_cast<Eigen::Index>(row_labels_.size()) ||
      values_.cols() != static_cast<Eigen::Index>(col_labels_.size())) {
    throw Error(ErrorCode::kShapeMismatch, "matrix dimensions do not match label lists");
  }
}

Channel Channel::FromRows(Labels inputs, Labels outputs,
                          const std::vector<std::vector<double>>& rows) {
  if (rows.size() != inputs.size()) {
    throw Error(ErrorCode::kShapeMismatch, "row count " + std::to_string(rows.size()) +
                                               " != input count " +
                                               std::to_string(inputs.size()));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(inputs.size()),
                    static_cast<Eigen::Index>(outputs.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != outputs.size()) {
      throw Error(ErrorCode::kShapeMismatch, "row " + std::to_string(r) + " has " +
                                                 std::to_string(rows[r].size()) +
                                                 " entries, expected " +
                                                 std::to_string(outputs.size()));
    }
    for (std::size_t c = 0; c < outputs.size(); ++c) m(r, c) = rows[r][c];
  }
  return FromMatrix(std::move(inputs), std::move(outputs), std::move(m));
}

Channel Channel::FromMatrix(Labels inputs, Labels outputs, Eigen::MatrixXd matrix) {
  if (matrix.rows() != static_cast<Eigen::Index>(inputs.size()) ||
      matrix.cols() != static_cast<Eigen::Index>(outputs.size())) {
    throw Error(ErrorCode::kShapeMismatch, "matrix dimensions do not match label lists");
  }
  if (inputs.empty()) throw Error(ErrorCode::kEmptyDomain, "channel has no inputs");
  CheckUnique(inputs, "input");
  CheckUnique(outputs, "output");
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const double v = matrix(r, c);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonStochastic, "non-finite entry in row '" + inputs[r] + "'");
      }
      if (v < -kStochasticTolerance) {
        throw Error(ErrorCode::kNegativeEntry, "negative entry in row '" + inputs[r] + "'");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row '" << inputs[r] << "' sums to " << sum;
      throw Error(ErrorCode::kNonStochastic, os.str());
    }
  }
  return Channel(std::move(inputs), std::move(outputs), std::move(matrix));
}

std::vector<std::vector<double>> Channel::Rows() const {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(matrix_.rows()));
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    rows[r].resize(static_cast<std::size_t>(matrix_.cols()));
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) rows[r][c] = matrix_(r, c);
  }
  return rows;
}

Distribution Distribution::Create(Labels labels, std::vector<double> weights) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyDomain, "distribution over empty set");
  if (labels.size() != weights.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, std::to_string(weights.size()) +
                                                     " weights for " +
                                                     std::to_string(labels.size()) + " labels");
  }
  CheckUnique(labels, "distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      throw Error(ErrorCode::kNonStochastic, "non-finite weight for '" + labels[i] + "'");
    }
    if (weights[i] < -kStochasticTolerance) {
      throw Error(ErrorCode::kNegativeEntry, "negative weight for '" + labels[i] + "'");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum;
    throw Error(ErrorCode::kNonStochastic, os.str());
  }
  return Distribution(std::move(labels), std::move(weights));
}

Distribution Distribution::Uniform(Labels labels) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyDomain, "uniform over empty set");
  const double w = 1.0 / static_cast<double>(labels.size());
  std::vector<double> weights(labels.size(), w);
  return Create(std::move(labels), std::move(weights));
}

Distribution Distribution::Point(Labels labels, std::size_t index) {
  if (index >= labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "point mass index out of range");
  }
  std::vector<double> weights(labels.size(), 0.0);
  weights[index] = 1.0;
  return Create(std::move(labels), std::move(weights));
}

std::vector<std::size_t> Distribution::Support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] > kZeroThreshold) out.push_back(i);
  }
  return out;
}

Distribution Uniform(const Labels& labels) { return Distribution::Uniform(labels); }

GainFunction GainFunction::Create(Labels guesses, Labels secrets, Eigen::MatrixXd table) {
  if (guesses.empty()) throw Error(ErrorCode::kEmptyDomain, "gain function with no guesses");
  if (secrets.empty()) throw Error(ErrorCode::kEmptyDomain, "gain function with no secrets");
  CheckUnique(guesses, "guess");
  CheckUnique(secrets, "secret");
  if (table.rows() != static_cast<Eigen::Index>(guesses.size()) ||
      table.cols() != static_cast<Eigen::Index>(secrets.size())) {
    throw Error(ErrorCode::kShapeMismatch, "gain table must be |guesses| x |secrets|");
  }
  if (!table.allFinite()) throw Error(ErrorCode::kInvalidArgument, "gain table not finite");
  return GainFunction(std::move(guesses), std::move(secrets), std::move(table), false);
}

GainFunction GainFunction::Bayes(const Labels& secrets) {
  if (secrets.empty()) throw Error(ErrorCode::kEmptyDomain, "gain function with no secrets");
  CheckUnique(secrets, "secret");
  const auto n = static_cast<Eigen::Index>(secrets.size());
  return GainFunction(secrets, secrets, Eigen::MatrixXd::Identity(n, n), true);
}

AdjacencyRelation AdjacencyRelation::AllPairs() { return AdjacencyRelation(Mode::kAllPairs, {}); }

AdjacencyRelation AdjacencyRelation::Explicit(
    std::vector<std::pair<std::string, std::string>> pairs) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> canonical;
  for (auto& [a, b] : pairs) {
    if (a == b) {
      throw Error(ErrorCode::kInvalidArgument, "adjacency pair ('" + a + "','" + b +
                                                   "') is reflexive");
    }
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (seen.insert(key).second) canonical.push_back(key);
  }
  return AdjacencyRelation(Mode::kExplicit, std::move(canonical));
}

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyRelation::Resolve(
    const Labels& inputs) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (mode_ == Mode::kAllPairs) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (std::size_t j = i + 1; j < inputs.size(); ++j) out.emplace_back(i, j);
    }
    return out;
  }
  for (const auto& [a, b] : pairs_) {
    auto ia = IndexOf(inputs, a);
    auto ib = IndexOf(inputs, b);
    if (!ia || !ib) {
      throw Error(ErrorCode::kLabelMismatch,
                  "adjacency pair ('" + a + "','" + b + "') names an unknown input");
    }
    out.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Channel> AlignOutputs(const std::vector<Channel>& channels) {
  if (channels.empty()) return {};
  const Labels& inputs = channels.front().inputs();
  Labels all;
  for (const auto& c : channels) {
    if (c.inputs() != inputs) {
      throw Error(ErrorCode::kInputMismatch, "channels do not share the same input list");
    }
    for (const auto& y : c.outputs()) {
      if (!IndexOf(all, y)) all.push_back(y);
    }
  }
  std::vector<Channel> out;
  out.reserve(channels.size());
  for (const auto& c : channels) {
    if (c.outputs() == all) {
      out.push_back(c);
      continue;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.num_inputs(), static_cast<Eigen::Index>(all.size()));
    for (Eigen::Index y = 0; y < c.num_outputs(); ++y) {
      const auto col = static_cast<Eigen::Index>(*IndexOf(all, c.outputs()[y]));
      m.col(col) = c.matrix().col(y);
    }
    out.push_back(Channel::FromMatrix(inputs, all, std::move(m)));
  }
  return out;
}

GameSpec GameSpec::Create(Labels defender_actions, Labels attacker_actions,
                          std::vector<Channel> channels, Measure measure) {
  if (defender_actions.empty() || attacker_actions.empty()) {
    throw Error(ErrorCode::kEmptyDomain, "game needs at least one action per player");
  }
  CheckUnique(defender_actions, "defender action");
  CheckUnique(attacker_actions, "attacker action");
  if (channels.size() != defender_actions.size() * attacker_actions.size()) {
    throw Error(ErrorCode::kMissingChannel,
                "expected " + std::to_string(defender_actions.size() * attacker_actions.size()) +
                    " channels, got " + std::to_string(channels.size()));
  }
  channels = AlignOutputs(channels);
  const Labels& inputs = channels.front().inputs();
  if (auto* q = std::get_if<QifMeasure>(&measure)) {
    if (q->prior.labels() != inputs) {
      throw Error(ErrorCode::kLabelMismatch, "prior labels differ from channel inputs");
    }
    if (q->gain.secrets() != inputs) {
      throw Error(ErrorCode::kLabelMismatch, "gain function secrets differ from channel inputs");
    }
  } else {
    const auto& adj = std::get<DpMeasure>(measure).adjacency;
    adj.Resolve(inputs);
    for (std::size_t d = 0; d < defender_actions.size(); ++d) {
      for (std::size_t a = 0; a < attacker_actions.size(); ++a) {
        if (!IsConforming(channels[d * attacker_actions.size() + a], adj)) {
          throw Error(ErrorCode::kNonConforming, "channel (" + defender_actions[d] + "," +
                                                     attacker_actions[a] +
                                                     ") is not conforming to the adjacency");
        }
      }
    }
  }
  return GameSpec(std::move(defender_actions), std::move(attacker_actions), std::move(channels),
                  std::move(measure));
}

const QifMeasure& GameSpec::qif() const {
  if (const auto* q = std::get_if<QifMeasure>(&measure_)) return *q;
  throw Error(ErrorCode::kMeasureMismatch, "expected a QIF game, got a DP game");
}

const DpMeasure& GameSpec::dp() const {
  if (const auto* d = std::get_if<DpMeasure>(&measure_)) return *d;
  throw Error(ErrorCode::kMeasureMismatch, "expected a DP game, got a QIF game");
}

std::vector<Channel> GameSpec::ChannelsForAttack(std::size_t a) const {
  std::vector<Channel> out;
  out.reserve(defender_actions_.size());
  for (std::size_t d = 0; d < defender_actions_.size(); ++d) out.push_back(channel(d, a));
  return out;
}

}  // namespace leakgame
