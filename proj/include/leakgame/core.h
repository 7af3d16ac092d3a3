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

// Domain types shared by every part of the library: channels, distributions,
// gain functions, adjacency relations and the game data model.
//
// Every type is immutable after construction. Factories validate their
// arguments and throw `leakgame::Error` carrying an `ErrorCode`.

#ifndef LEAKGAME_CORE_H_
#define LEAKGAME_CORE_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace leakgame {

// Row sums and probability masses must match 1 within this tolerance.
inline constexpr double kStochasticTolerance = 1e-9;
// Entries below this magnitude count as exact zeros for zero-pattern checks.
inline constexpr double kZeroThreshold = 1e-15;

enum class ErrorCode {
  kNonStochastic,
  kNegativeEntry,
  kDuplicateLabel,
  kInputMismatch,
  kEmptyDomain,
  kShapeMismatch,
  kWeightCountMismatch,
  kDimensionMismatch,
  kLabelMismatch,
  kZeroPriorVulnerability,
  kNegativeEpsilon,
  kMeasureMismatch,
  kMissingChannel,
  kNonConforming,
  kInfeasible,
  kNumericalFailure,
  kMaxIterationsExceeded,
  kDomainTooSmall,
  kInconsistentSecrets,
  kDisconnectedGraph,
  kInvalidForwardProbability,
  kTooManyActions,
  kParameterOutOfRange,
  kInvalidArgument,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

using Labels = std::vector<std::string>;

// Index of `label` in `labels`, or nullopt.
std::optional<std::size_t> IndexOf(const Labels& labels, const std::string& label);

// A labeled real matrix with no stochasticity requirement. Concatenation
// produces one of these since its rows need not sum to one.
class Matrix {
 public:
  Matrix(Labels row_labels, Labels col_labels, Eigen::MatrixXd values);

  const Labels& row_labels() const { return row_labels_; }
  const Labels& col_labels() const { return col_labels_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return values_(r, c); }

 private:
  Labels row_labels_;
  Labels col_labels_;
  Eigen::MatrixXd values_;
};

// Row-stochastic matrix from secret inputs to observable outputs.
class Channel {
 public:
  // Validates dimensions, labels, non-negativity and row sums. Entries are
  // never rescaled.
  static Channel FromRows(Labels inputs, Labels outputs,
                          const std::vector<std::vector<double>>& rows);
  static Channel FromMatrix(Labels inputs, Labels outputs, Eigen::MatrixXd matrix);

  const Labels& inputs() const { return inputs_; }
  const Labels& outputs() const { return outputs_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index num_inputs() const { return matrix_.rows(); }
  Eigen::Index num_outputs() const { return matrix_.cols(); }
  double operator()(Eigen::Index x, Eigen::Index y) const { return matrix_(x, y); }

  std::vector<std::vector<double>> Rows() const;

 private:
  Channel(Labels inputs, Labels outputs, Eigen::MatrixXd matrix)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)), matrix_(std::move(matrix)) {}

  Labels inputs_;
  Labels outputs_;
  Eigen::MatrixXd matrix_;
};

// Probability distribution over a labeled finite set. Used both for priors
// over secrets and for mixed strategies over actions.
class Distribution {
 public:
  static Distribution Create(Labels labels, std::vector<double> weights);
  static Distribution Uniform(Labels labels);
  static Distribution Point(Labels labels, std::size_t index);

  const Labels& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  // Indices with weight above kZeroThreshold, ascending.
  std::vector<std::size_t> Support() const;

 private:
  Distribution(Labels labels, std::vector<double> weights)
      : labels_(std::move(labels)), weights_(std::move(weights)) {}

  Labels labels_;
  std::vector<double> weights_;
};

using Prior = Distribution;
using MixedStrategy = Distribution;

Distribution Uniform(const Labels& labels);

// Gain function g(w, x) over a finite guess set; table is |guesses| x |secrets|.
class GainFunction {
 public:
  static GainFunction Create(Labels guesses, Labels secrets, Eigen::MatrixXd table);
  // Identity gain: guesses are the secrets, g(w, x) = [w == x].
  static GainFunction Bayes(const Labels& secrets);

  const Labels& guesses() const { return guesses_; }
  const Labels& secrets() const { return secrets_; }
  const Eigen::MatrixXd& table() const { return table_; }
  bool is_bayes() const { return is_bayes_; }

 private:
  GainFunction(Labels guesses, Labels secrets, Eigen::MatrixXd table, bool is_bayes)
      : guesses_(std::move(guesses)),
        secrets_(std::move(secrets)),
        table_(std::move(table)),
        is_bayes_(is_bayes) {}

  Labels guesses_;
  Labels secrets_;
  Eigen::MatrixXd table_;
  bool is_bayes_;
};

// Symmetric irreflexive relation on secrets. kAllPairs makes every two
// distinct secrets adjacent (local differential privacy).
class AdjacencyRelation {
 public:
  enum class Mode { kAllPairs, kExplicit };

  static AdjacencyRelation AllPairs();
  // Pairs are unordered; duplicates and reversed duplicates collapse.
  static AdjacencyRelation Explicit(std::vector<std::pair<std::string, std::string>> pairs);

  Mode mode() const { return mode_; }
  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

  // Adjacent index pairs (i < j) resolved against `inputs`. Throws
  // kLabelMismatch if an explicit pair names an unknown input.
  std::vector<std::pair<std::size_t, std::size_t>> Resolve(const Labels& inputs) const;

 private:
  AdjacencyRelation(Mode mode, std::vector<std::pair<std::string, std::string>> pairs)
      : mode_(mode), pairs_(std::move(pairs)) {}

  Mode mode_;
  std::vector<std::pair<std::string, std::string>> pairs_;
};

struct QifMeasure {
  Prior prior;
  GainFunction gain;
};

struct DpMeasure {
  AdjacencyRelation adjacency;
};

using Measure = std::variant<QifMeasure, DpMeasure>;

// Re-express every channel over the union of all output labels, filling the
// new columns with zeros. Union order: first channel's outputs, then each new
// label in order of first appearance.
std::vector<Channel> AlignOutputs(const std::vector<Channel>& channels);

// A zero-sum information-leakage game: channel C_da for every pair of
// defender action d and attacker action a, plus the utility measure.
class GameSpec {
 public:
  // `channels` is row-major: channels[d * |attacker_actions| + a].
  // Outputs are aligned here; DP games reject non-conforming channels.
  static GameSpec Create(Labels defender_actions, Labels attacker_actions,
                         std::vector<Channel> channels, Measure measure);

  const Labels& defender_actions() const { return defender_actions_; }
  const Labels& attacker_actions() const { return attacker_actions_; }
  std::size_t num_defender_actions() const { return defender_actions_.size(); }
  std::size_t num_attacker_actions() const { return attacker_actions_.size(); }
  const Channel& channel(std::size_t d, std::size_t a) const {
    return channels_[d * attacker_actions_.size() + a];
  }
  const std::vector<Channel>& channels() const { return channels_; }
  const Labels& inputs() const { return channels_.front().inputs(); }
  const Labels& outputs() const { return channels_.front().outputs(); }
  const Measure& measure() const { return measure_; }

  bool is_qif() const { return std::holds_alternative<QifMeasure>(measure_); }
  bool is_dp() const { return std::holds_alternative<DpMeasure>(measure_); }
  // Throw kMeasureMismatch when the game has the other kind of measure.
  const QifMeasure& qif() const;
  const DpMeasure& dp() const;

  // Channels C_da for all d at fixed a, in defender order.
  std::vector<Channel> ChannelsForAttack(std::size_t a) const;

 private:
  GameSpec(Labels defender_actions, Labels attacker_actions, std::vector<Channel> channels,
           Measure measure)
      : defender_actions_(std::move(defender_actions)),
        attacker_actions_(std::move(attacker_actions)),
        channels_(std::move(channels)),
        measure_(std::move(measure)) {}

  Labels defender_actions_;
  Labels attacker_actions_;
  std::vector<Channel> channels_;
  Measure measure_;
};

struct SolveReport {
  MixedStrategy defender_strategy;
  // Posterior vulnerability for QIF games, DP level in nats for DP games.
  double value = 0.0;
  std::int64_t iterations = 0;
  // f(best) - best lower bound for the subgradient solver. For the
  // fractional-programming solver, ln(best ratio) - ln(lower bound) when
  // certified and the last |F_k| otherwise. 0 for closed forms.
  double certificate_gap = 0.0;
  bool certified = true;
  std::optional<MixedStrategy> attacker_strategy;
};

}  // namespace leakgame

#endif  // LEAKGAME_CORE_H_
