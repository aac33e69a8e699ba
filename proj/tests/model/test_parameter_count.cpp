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

#include <gtest/gtest.h>

#include "bnhate/model/hybrid_head.hpp"
#include "bnhate/rng.hpp"

namespace bnhate::model {
namespace {

std::int64_t enumerate(const ModelConfig& cfg) {
  HybridHead<float> head(cfg);
  std::int64_t n = 0;
  for (auto* p : head.parameters()) n += p->size();
  return n;
}

ModelConfig unit_config(std::int64_t gru_layers) {
  ModelConfig c;
  c.d_embed = 1;
  c.gru_layers = gru_layers;
  c.gru_hidden = 1;
  c.cnn_kernels = {1};
  c.cnn_filters = 1;
  c.fusion_dim = 1;
  c.num_labels = 1;
  return c;
}

TEST(ParameterCount, UnitDimensionsByHand) {
  // One GRU layer: 2 directions x 3 gates x (w_ih 1 + w_hh 1 + b_ih 1 + b_hh 1) = 24.
  // GRU norm over width 2: 4. GRU attention, width 2: 4 x (4 + 2) = 24.
  // Kernel-1 conv: 1 + 1. CNN norm: 2. CNN attention, width 1: 4 x 2 = 8.
  // Fusion 3 -> 1: 3 + 1, its norm 2. Output 1 -> 1: 2.
  EXPECT_EQ(parameter_count(unit_config(1)), 24 + 4 + 24 + 2 + 2 + 8 + 4 + 2 + 2);
  // A second GRU layer reads width 2: 2 x 3 x (2 + 1 + 1 + 1) = 30 more.
  EXPECT_EQ(parameter_count(unit_config(2)), 102);
  EXPECT_EQ(enumerate(unit_config(1)), 72);
  EXPECT_EQ(enumerate(unit_config(2)), 102);
}

TEST(ParameterCount, DefaultConfiguration) {
  ModelConfig c;
  EXPECT_EQ(enumerate(c), 1989894);
  EXPECT_EQ(parameter_count(c), 1989894);
  c.num_labels = 5;
  EXPECT_EQ(parameter_count(c), 1989894 - 129);
}

TEST(ParameterCount, MatchesEnumerationOnRandomConfigs) {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    ModelConfig c;
    c.d_embed = 1 + static_cast<std::int64_t>(rng.uniform_index(40));
    c.gru_layers = 1 + static_cast<std::int64_t>(rng.uniform_index(3));
    c.gru_hidden = 1 + static_cast<std::int64_t>(rng.uniform_index(24));
    c.attn_heads = 1;
    c.cnn_kernels.clear();
    const auto nk = 1 + rng.uniform_index(4);
    for (std::uint64_t k = 0; k < nk; ++k) c.cnn_kernels.push_back(1 + static_cast<std::int64_t>(rng.uniform_index(5)));
    c.cnn_filters = 1 + static_cast<std::int64_t>(rng.uniform_index(24));
    c.fusion_dim = 1 + static_cast<std::int64_t>(rng.uniform_index(24));
    c.num_labels = 2 + static_cast<std::int64_t>(rng.uniform_index(5));
    c.seed = rng.next();
    EXPECT_EQ(parameter_count(c), enumerate(c)) << nlohmann::json(c).dump();
  }
}

TEST(ParameterCount, MonotoneInFilters) {
  ModelConfig c;
  const auto base = parameter_count(c);
  c.cnn_filters *= 2;
  EXPECT_GT(parameter_count(c), base);
}

}  // namespace
}  // namespace bnhate::model
