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

#include "leakgame/algebra.h"

namespace leakgame {

std::string TagOutput(const std::string& label, const std::string& tag) {
  return label + "#" + tag;
}

Channel HiddenChoice(const MixedStrategy& weights, std::span<const Channel> channels) {
  if (channels.empty()) throw Error(ErrorCode::kEmptyDomain, "hidden choice over no channels");
  if (weights.size() != channels.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, std::to_string(weights.size()) +
                                                     " weights for " +
                                                     std::to_string(channels.size()) +
                                                     " channels");
  }
  const Channel& first = channels.front();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(first.num_inputs(), first.num_outputs());
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const Channel& c = channels[i];
    if (c.inputs() != first.inputs() || c.outputs() != first.outputs()) {
      throw Error(ErrorCode::kShapeMismatch, "hidden choice operands are not compatible");
    }
    if (weights[i] != 0.0) sum.noalias() += weights[i] * c.matrix();
  }
  return Channel::FromMatrix(first.inputs(), first.outputs(), std::move(sum));
}

namespace {

Eigen::MatrixXd ConcatValues(std::span<const Channel> channels, std::span<const double> scale,
                             std::span<const std::string> tags, Labels* outputs) {
  if (channels.empty()) throw Error(ErrorCode::kEmptyDomain, "concatenation of no channels");
  if (tags.size() != channels.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, "one tag per channel required");
  }
  const Labels& inputs = channels.front().inputs();
  Eigen::Index cols = 0;
  for (const auto& c : channels) {
    if (c.inputs() != inputs) {
      throw Error(ErrorCode::kInputMismatch, "concatenated channels must share inputs");
    }
    cols += c.num_outputs();
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(inputs.size()), cols);
  outputs->clear();
  outputs->reserve(static_cast<std::size_t>(cols));
  Eigen::Index at = 0;
  for (std::size_t j = 0; j < channels.size(); ++j) {
    const Channel& c = channels[j];
    m.middleCols(at, c.num_outputs()) = scale[j] * c.matrix();
    for (const auto& y : c.outputs()) outputs->push_back(TagOutput(y, tags[j]));
    at += c.num_outputs();
  }
  return m;
}

}  // namespace

Matrix Concat(std::span<const Channel> channels, std::span<const std::string> tags) {
  std::vector<double> ones(channels.size(), 1.0);
  Labels outputs;
  Eigen::MatrixXd m = ConcatValues(channels, ones, tags, &outputs);
  return Matrix(channels.front().inputs(), std::move(outputs), std::move(m));
}

Channel VisibleChoice(const MixedStrategy& weights, std::span<const Channel> channels) {
  if (weights.size() != channels.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, std::to_string(weights.size()) +
                                                     " weights for " +
                                                     std::to_string(channels.size()) +
                                                     " channels");
  }
  Labels outputs;
  Eigen::MatrixXd m = ConcatValues(channels, weights.weights(), weights.labels(), &outputs);
  return Channel::FromMatrix(channels.front().inputs(), std::move(outputs), std::move(m));
}

Channel Cascade(const Channel& first, const Channel& second) {
  if (first.outputs() != second.inputs()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cascade: first channel's outputs differ from second channel's inputs");
  }
  Eigen::MatrixXd product = first.matrix() * second.matrix();
  return Channel::FromMatrix(first.inputs(), second.outputs(), std::move(product));
}

}  // namespace leakgame
