// Copyright 2026 The bnhate Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bnhate::model {

/// Architecture hyperparameters of the classifier head. Defaults are the
/// reference configuration; num_labels follows the active label scheme.
struct ModelConfig {
  std::int64_t d_embed = 768;
  std::int64_t gru_layers = 2;
  std::int64_t gru_hidden = 128;
  std::int64_t attn_heads = 1;
  std::vector<std::int64_t> cnn_kernels{1, 2, 3};
  std::int64_t cnn_filters = 128;
  std::int64_t fusion_dim = 128;
  double dropout = 0.3;
  std::int64_t num_labels = 6;
  std::uint64_t seed = 42;

  std::int64_t gru_width() const { return 2 * gru_hidden; }
  std::int64_t cnn_width() const { return static_cast<std::int64_t>(cnn_kernels.size()) * cnn_filters; }

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

/// Closed-form number of head parameters (the encoder is excluded):
/// two-bias GRU gates, three layer norms, two attention blocks with biased
/// q/k/v/out projections, the convolutions, the fusion and output layers.
std::int64_t parameter_count(const ModelConfig& c);

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bnhate::model
