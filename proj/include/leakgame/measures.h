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

// Vulnerability, leakage and differential-privacy level of channels.
//
// Vulnerabilities are g-vulnerabilities over a finite guess set:
//
//   prior:     max_w sum_x pi(x) g(w, x)
//   posterior: sum_y max_w sum_x pi(x) C(x, y) g(w, x)
//
// The differential-privacy level of a channel C under adjacency ~ is
//
//   max { ln C(x, y) / C(x', y) : x ~ x', C(x, y) > 0 }
//
// in nats, and is infinite exactly when C is not conforming to ~ (some
// adjacent pair has a zero and a non-zero entry in the same column).

#ifndef LEAKGAME_MEASURES_H_
#define LEAKGAME_MEASURES_H_

#include <limits>

#include "leakgame/core.h"

namespace leakgame {

class DpLevel {
 public:
  DpLevel() = default;
  static DpLevel Finite(double nats) { return DpLevel(nats); }
  static DpLevel Infinite() { return DpLevel(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  // +inf when infinite.
  double value() const { return value_; }

  friend auto operator<=>(const DpLevel&, const DpLevel&) = default;

 private:
  explicit DpLevel(double v) : value_(v) {}
  double value_ = 0.0;
};

enum class LeakageMode { kAdditive, kMultiplicative };

double PriorVulnerability(const GainFunction& gain, const Prior& prior);
double PosteriorVulnerability(const GainFunction& gain, const Prior& prior,
                              const Channel& channel);
// sum_y max_x pi(x) C(x, y).
double BayesPosterior(const Prior& prior, const Channel& channel);
double Leakage(const GainFunction& gain, const Prior& prior, const Channel& channel,
               LeakageMode mode);

bool IsConforming(const Channel& channel, const AdjacencyRelation& adjacency);
DpLevel DpLevelOf(const Channel& channel, const AdjacencyRelation& adjacency);
// True iff the channel is eps-differentially private.
bool CheckDp(const Channel& channel, const AdjacencyRelation& adjacency, double eps);

}  // namespace leakgame

#endif  // LEAKGAME_MEASURES_H_
