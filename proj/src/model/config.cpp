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

#include "bnhate/model/config.hpp"

namespace bnhate::model {

void ModelConfig::validate() const {
  const auto positive = [](std::int64_t v, const char* name) {
    if (v <= 0) throw std::invalid_argument(std::string("model.") + name + " must be positive");
  };
  positive(d_embed, "d_embed");
  positive(gru_layers, "gru_layers");
  positive(gru_hidden, "gru_hidden");
  positive(attn_heads, "attn_heads");
  positive(cnn_filters, "cnn_filters");
  positive(fusion_dim, "fusion_dim");
  positive(num_labels, "num_labels");
  if (cnn_kernels.empty()) throw std::invalid_argument("model.cnn_kernels must not be empty");
  for (auto k : cnn_kernels) positive(k, "cnn_kernels entry");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("model.dropout must lie in [0, 1)");
  if (gru_width() % attn_heads != 0 || cnn_filters % attn_heads != 0) {
    throw std::invalid_argument("model.attn_heads must divide both attention widths");
  }
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"d_embed", c.d_embed},       {"gru_layers", c.gru_layers}, {"gru_hidden", c.gru_hidden},
                     {"attn_heads", c.attn_heads}, {"cnn_kernels", c.cnn_kernels}, {"cnn_filters", c.cnn_filters},
                     {"fusion_dim", c.fusion_dim}, {"dropout", c.dropout},     {"num_labels", c.num_labels},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  j.at("d_embed").get_to(c.d_embed);
  j.at("gru_layers").get_to(c.gru_layers);
  j.at("gru_hidden").get_to(c.gru_hidden);
  j.at("attn_heads").get_to(c.attn_heads);
  j.at("cnn_kernels").get_to(c.cnn_kernels);
  j.at("cnn_filters").get_to(c.cnn_filters);
  j.at("fusion_dim").get_to(c.fusion_dim);
  j.at("dropout").get_to(c.dropout);
  j.at("num_labels").get_to(c.num_labels);
  j.at("seed").get_to(c.seed);
}

std::int64_t parameter_count(const ModelConfig& c) {
  const std::int64_t H = c.gru_hidden;
  std::int64_t n = 0;
  for (std::int64_t l = 0; l < c.gru_layers; ++l) {
    const std::int64_t in = l == 0 ? c.d_embed : 2 * H;
    n += 2 * 3 * (H * (in + H) + 2 * H);
  }
  const auto attention = [](std::int64_t w) { return 4 * (w * w + w); };
  n += 2 * c.gru_width() + attention(c.gru_width());
  for (auto k : c.cnn_kernels) n += c.cnn_filters * (c.d_embed * k) + c.cnn_filters;
  n += 2 * c.cnn_width() + attention(c.cnn_filters);
  n += (c.gru_width() + c.cnn_width()) * c.fusion_dim + c.fusion_dim + 2 * c.fusion_dim;
  n += c.fusion_dim * c.num_labels + c.num_labels;
  return n;
}

}  // namespace bnhate::model
