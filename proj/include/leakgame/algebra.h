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

// Channel composition operators.

#ifndef LEAKGAME_ALGEBRA_H_
#define LEAKGAME_ALGEBRA_H_

#include <span>
#include <string>

#include "leakgame/core.h"

namespace leakgame {

// Concatenated outputs are tagged "<label>#<tag>".
std::string TagOutput(const std::string& label, const std::string& tag);

// Entrywise sum_i weights(i) * channels[i]. Channels must share inputs and
// outputs; the result is a channel.
Channel HiddenChoice(const MixedStrategy& weights, std::span<const Channel> channels);

// Column concatenation. Output (y, j) holds channels[j](x, y). No scaling is
// applied, so the result is a plain matrix.
Matrix Concat(std::span<const Channel> channels, std::span<const std::string> tags);

// Concatenation of weights(i) * channels[i], tagged by the weight labels.
Channel VisibleChoice(const MixedStrategy& weights, std::span<const Channel> channels);

// Sequential composition: (first ; second)(x, y) = sum_z first(x, z) second(z, y).
Channel Cascade(const Channel& first, const Channel& second);

}  // namespace leakgame

#endif  // LEAKGAME_ALGEBRA_H_
