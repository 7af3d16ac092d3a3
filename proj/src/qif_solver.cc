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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "leakgame/algebra.h"
#include "leakgame/measures.h"

namespace leakgame {

namespace {

// Values within this distance of the running max count as ties; ties go to
// the lowest index.
constexpr double kTieTolerance = 1e-12;

void CheckStrategy(const MixedStrategy& s, const Labels& actions, const char* who) {
  if (s.labels() != actions) {
    throw Error(ErrorCode::kLabelMismatch,
                std::string(who) + " strategy labels differ from the game's actions");
  }
}

}  // namespace

QifObjective::QifObjective(const GameSpec& game)
    : num_defender_(game.num_defender_actions()),
      num_outputs_(game.outputs().size()),
      num_guesses_(game.qif().gain.guesses().size()) {
  const QifMeasure& m = game.qif();
  const Eigen::Map<const Eigen::VectorXd> pi(m.prior.weights().data(),
                                             static_cast<Eigen::Index>(m.prior.size()));
  const auto rows = static_cast<Eigen::Index>(num_outputs_ * num_guesses_);
  tensors_.reserve(game.num_attacker_actions());
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    Eigen::MatrixXd k(rows, static_cast<Eigen::Index>(num_defender_));
    for (std::size_t d = 0; d < num_defender_; ++d) {
      // scores(w, y) = sum_x g(w, x) pi(x) C_da(x, y)
      const Eigen::MatrixXd scores = m.gain.table() * (pi.asDiagonal() * game.channel(d, a).matrix());
      for (std::size_t y = 0; y < num_outputs_; ++y) {
        for (std::size_t w = 0; w < num_guesses_; ++w) {
          k(static_cast<Eigen::Index>(y * num_guesses_ + w), static_cast<Eigen::Index>(d)) =
              scores(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(y));
        }
      }
    }
    tensors_.push_back(std::move(k));
  }
}

double QifObjective::ColumnMaxSum(std::size_t a, std::span<const double> delta,
                                  Eigen::VectorXd& scores,
                                  std::vector<std::size_t>* best_rows) const {
  const Eigen::Map<const Eigen::VectorXd> dv(delta.data(), static_cast<Eigen::Index>(delta.size()));
  scores.noalias() = tensors_[a] * dv;
  double total = 0.0;
  for (std::size_t y = 0; y < num_outputs_; ++y) {
    const std::size_t base = y * num_guesses_;
    std::size_t best = base;
    double best_v = scores(static_cast<Eigen::Index>(base));
    for (std::size_t w = 1; w < num_guesses_; ++w) {
      const double v = scores(static_cast<Eigen::Index>(base + w));
      if (v > best_v + kTieTolerance) {
        best_v = v;
        best = base + w;
      }
    }
    total += best_v;
    if (best_rows != nullptr) (*best_rows)[y] = best;
  }
  return total;
}

double QifObjective::ValueAt(std::span<const double> delta, std::size_t a) const {
  if (delta.size() != num_defender_) {
    throw Error(ErrorCode::kWeightCountMismatch, "strategy size differs from |D|");
  }
  Eigen::VectorXd scores(tensors_[a].rows());
  return ColumnMaxSum(a, delta, scores, nullptr);
}

FValue QifObjective::Evaluate(std::span<const double> delta) const {
  if (delta.size() != num_defender_) {
    throw Error(ErrorCode::kWeightCountMismatch, "strategy size differs from |D|");
  }
  Eigen::VectorXd scores(tensors_.front().rows());
  FValue out{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t a = 0; a < tensors_.size(); ++a) {
    const double v = ColumnMaxSum(a, delta, scores, nullptr);
    if (v > out.value + kTieTolerance) out = {v, a};
  }
  return out;
}

FValue QifObjective::EvaluateWithSubgradient(std::span<const double> delta,
                                             std::span<double> h) const {
  Workspace ws;
  return EvaluateWithSubgradient(delta, h, ws);
}

FValue QifObjective::EvaluateWithSubgradient(std::span<const double> delta, std::span<double> h,
                                             Workspace& ws) const {
  if (delta.size() != num_defender_ || h.size() != num_defender_) {
    throw Error(ErrorCode::kWeightCountMismatch, "strategy size differs from |D|");
  }
  ws.scores.resize(tensors_.front().rows());
  ws.best_rows.resize(num_outputs_);
  ws.candidate_rows.resize(num_outputs_);
  FValue out{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t a = 0; a < tensors_.size(); ++a) {
    const double v = ColumnMaxSum(a, delta, ws.scores, &ws.candidate_rows);
    if (v > out.value + kTieTolerance) {
      out = {v, a};
      std::swap(ws.best_rows, ws.candidate_rows);
    }
  }
  const Eigen::MatrixXd& k = tensors_[out.argmax_action];
  for (std::size_t d = 0; d < num_defender_; ++d) {
    double sum = 0.0;
    for (std::size_t y = 0; y < num_outputs_; ++y) {
      sum += k(static_cast<Eigen::Index>(ws.best_rows[y]), static_cast<Eigen::Index>(d));
    }
    h[d] = sum;
  }
  return out;
}

double QifObjective::LipschitzBound() const {
  double bound = 0.0;
  for (const auto& k : tensors_) {
    for (std::size_t d = 0; d < num_defender_; ++d) {
      double sum = 0.0;
      for (std::size_t y = 0; y < num_outputs_; ++y) {
        double m = 0.0;
        for (std::size_t w = 0; w < num_guesses_; ++w) {
          m = std::max(m, std::abs(k(static_cast<Eigen::Index>(y * num_guesses_ + w),
                                     static_cast<Eigen::Index>(d))));
        }
        sum += m;
      }
      bound = std::max(bound, sum);
    }
  }
  return bound;
}

double QifUtility(const GameSpec& game, const MixedStrategy& delta, const MixedStrategy& alpha) {
  const QifMeasure& m = game.qif();
  CheckStrategy(delta, game.defender_actions(), "defender");
  CheckStrategy(alpha, game.attacker_actions(), "attacker");
  double total = 0.0;
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    if (alpha[a] == 0.0) continue;
    const std::vector<Channel> family = game.ChannelsForAttack(a);
    const Channel mixed = HiddenChoice(delta, family);
    total += alpha[a] * PosteriorVulnerability(m.gain, m.prior, mixed);
  }
  return total;
}

FValue FValueAt(const GameSpec& game, const MixedStrategy& delta) {
  CheckStrategy(delta, game.defender_actions(), "defender");
  return QifObjective(game).Evaluate(delta.weights());
}

std::vector<double> Subgradient(const GameSpec& game, const MixedStrategy& delta) {
  CheckStrategy(delta, game.defender_actions(), "defender");
  std::vector<double> h(game.num_defender_actions());
  QifObjective(game).EvaluateWithSubgradient(delta.weights(), h);
  return h;
}

std::size_t AttackerBestResponse(const GameSpec& game, const MixedStrategy& delta) {
  return FValueAt(game, delta).argmax_action;
}

namespace {

// Projection into caller-provided storage; `sorted` is scratch of size n.
void ProjectInto(std::span<const double> v, std::span<double> out, std::vector<double>& sorted) {
  const std::size_t n = v.size();
  sorted.assign(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double t = (1.0 - cumulative) / static_cast<double>(j + 1);
    if (sorted[j] + t > 0.0) theta = t;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(v[i] + theta, 0.0);
    sum += out[i];
  }
  // Rounding can leave the sum a few ulps off one.
  if (sum > 0.0 && sum != 1.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
  }
}

}  // namespace

std::vector<double> ProjectOntoSimplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmptyDomain, "projection of an empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite vector entry");
  }
  std::vector<double> out(v.size());
  std::vector<double> scratch;
  ProjectInto(v, out, scratch);
  return out;
}

MixedStrategy ProjectSimplex(std::span<const double> v, const Labels& labels) {
  return Distribution::Create(labels, ProjectOntoSimplex(v));
}

SolveReport SolveQif(const GameSpec& game, const QifSolverOptions& options) {
  return SolveQif(game, options, nullptr);
}

SolveReport SolveQif(const GameSpec& game, const QifSolverOptions& options,
                     const std::function<void(const DescentState&)>& observer) {
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (options.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  const QifObjective objective(game);
  const std::size_t n = game.num_defender_actions();

  if (n == 1) {
    const FValue f = objective.Evaluate(std::vector<double>{1.0});
    SolveReport report{Distribution::Point(game.defender_actions(), 0), f.value, 1, 0.0, true,
                       std::nullopt};
    return report;
  }

  const double radius_sq = static_cast<double>(n - 1) / static_cast<double>(n);
  const auto step = [&](std::int64_t k) {
    return options.step_size ? options.step_size(k) : 0.1 / std::sqrt(static_cast<double>(k));
  };

  DescentState state;
  state.delta.assign(n, 1.0 / static_cast<double>(n));
  state.best_f = std::numeric_limits<double>::infinity();
  state.best_lower = -std::numeric_limits<double>::infinity();
  state.best_delta = state.delta;

  std::vector<double> h(n);
  std::vector<double> moved(n);
  std::vector<double> scratch;
  QifObjective::Workspace ws;
  bool certified = false;
  std::int64_t k = 1;
  for (; k <= options.max_iter; ++k) {
    state.k = k;
    const FValue f = objective.EvaluateWithSubgradient(state.delta, h, ws);
    const double s = step(k);
    double h_norm_sq = 0.0;
    for (double v : h) h_norm_sq += v * v;
    state.step_sum += s;
    state.weighted_f_sum += s * f.value;
    state.grad_norm_sum += s * s * h_norm_sq;
    if (f.value < state.best_f) {
      state.best_f = f.value;
      state.best_delta = state.delta;
    }
    const double lower =
        (2.0 * state.weighted_f_sum - radius_sq - state.grad_norm_sum) / (2.0 * state.step_sum);
    state.best_lower = std::max(state.best_lower, lower);
    if (observer) observer(state);
    if (state.best_f - state.best_lower <= options.tolerance) {
      certified = true;
      break;
    }
    for (std::size_t d = 0; d < n; ++d) moved[d] = state.delta[d] - s * h[d];
    ProjectInto(moved, state.delta, scratch);
  }

  SolveReport report{Distribution::Create(game.defender_actions(), state.best_delta),
                     state.best_f,
                     certified ? k : options.max_iter,
                     state.best_f - state.best_lower,
                     certified,
                     std::nullopt};
  return report;
}

}  // namespace leakgame
