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

#include "leakgame/measures.h"

#include <algorithm>
#include <cmath>

namespace leakgame {

namespace {

void CheckPriorLabels(const GainFunction& gain, const Prior& prior) {
  if (gain.secrets() != prior.labels()) {
    throw Error(ErrorCode::kLabelMismatch, "gain function secrets differ from prior labels");
  }
}

void CheckChannelLabels(const Prior& prior, const Channel& channel) {
  if (prior.labels() != channel.inputs()) {
    throw Error(ErrorCode::kLabelMismatch, "prior labels differ from channel inputs");
  }
}

bool IsZero(double v) { return v < kZeroThreshold; }

}  // namespace

double PriorVulnerability(const GainFunction& gain, const Prior& prior) {
  CheckPriorLabels(gain, prior);
  const Eigen::Map<const Eigen::VectorXd> pi(prior.weights().data(),
                                             static_cast<Eigen::Index>(prior.size()));
  return (gain.table() * pi).maxCoeff();
}

double PosteriorVulnerability(const GainFunction& gain, const Prior& prior,
                              const Channel& channel) {
  CheckPriorLabels(gain, prior);
  CheckChannelLabels(prior, channel);
  const Eigen::Map<const Eigen::VectorXd> pi(prior.weights().data(),
                                             static_cast<Eigen::Index>(prior.size()));
  // joint(x, y) = pi(x) C(x, y); scores(w, y) = sum_x g(w, x) joint(x, y).
  const Eigen::MatrixXd joint = pi.asDiagonal() * channel.matrix();
  const Eigen::MatrixXd scores = gain.table() * joint;
  return scores.colwise().maxCoeff().sum();
}

double BayesPosterior(const Prior& prior, const Channel& channel) {
  CheckChannelLabels(prior, channel);
  double total = 0.0;
  for (Eigen::Index y = 0; y < channel.num_outputs(); ++y) {
    double best = 0.0;
    for (Eigen::Index x = 0; x < channel.num_inputs(); ++x) {
      best = std::max(best, prior[static_cast<std::size_t>(x)] * channel(x, y));
    }
    total += best;
  }
  return total;
}

double Leakage(const GainFunction& gain, const Prior& prior, const Channel& channel,
               LeakageMode mode) {
  const double before = PriorVulnerability(gain, prior);
  const double after = PosteriorVulnerability(gain, prior, channel);
  if (mode == LeakageMode::kAdditive) return after - before;
  if (std::abs(before) <= 0.0) {
    throw Error(ErrorCode::kZeroPriorVulnerability,
                "multiplicative leakage undefined for zero prior vulnerability");
  }
  return after / before;
}

bool IsConforming(const Channel& channel, const AdjacencyRelation& adjacency) {
  const auto pairs = adjacency.Resolve(channel.inputs());
  for (Eigen::Index y = 0; y < channel.num_outputs(); ++y) {
    for (const auto& [i, j] : pairs) {
      const auto xi = static_cast<Eigen::Index>(i);
      const auto xj = static_cast<Eigen::Index>(j);
      if (IsZero(channel(xi, y)) != IsZero(channel(xj, y))) return false;
    }
  }
  return true;
}

DpLevel DpLevelOf(const Channel& channel, const AdjacencyRelation& adjacency) {
  const auto pairs = adjacency.Resolve(channel.inputs());
  double level = 0.0;
  for (Eigen::Index y = 0; y < channel.num_outputs(); ++y) {
    for (const auto& [i, j] : pairs) {
      const double a = channel(static_cast<Eigen::Index>(i), y);
      const double b = channel(static_cast<Eigen::Index>(j), y);
      const bool za = IsZero(a);
      const bool zb = IsZero(b);
      if (za && zb) continue;
      if (za != zb) return DpLevel::Infinite();
      // The relation is symmetric, so both ratio directions count.
      level = std::max(level, std::abs(std::log(a / b)));
    }
  }
  return DpLevel::Finite(level);
}

bool CheckDp(const Channel& channel, const AdjacencyRelation& adjacency, double eps) {
  if (eps < 0.0 || std::isnan(eps)) {
    throw Error(ErrorCode::kNegativeEpsilon, "epsilon must be non-negative");
  }
  const DpLevel level = DpLevelOf(channel, adjacency);
  return !level.is_infinite() && level.value() <= eps + 1e-12;
}

}  // namespace leakgame
