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

#include "bnhate/encoder/pretrained.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace bnhate::encoder {

void require_pretrained_files(const std::filesystem::path& dir) {
  for (const char* name : {kConfigFile, kVocabFile, kWeightsFile}) {
    if (!std::filesystem::exists(dir / name)) throw BackendUnavailable((dir / name).string());
  }
}

TransformerConfig load_transformer_config(const std::filesystem::path& dir) {
  std::ifstream in(dir / kConfigFile);
  if (!in) throw BackendUnavailable((dir / kConfigFile).string());
  const nlohmann::json j = nlohmann::json::parse(in);
  TransformerConfig c;
  c.vocab_size = j.at("vocab_size").get<nn::Index>();
  c.hidden_size = j.at("hidden_size").get<nn::Index>();
  c.embedding_size = j.value("embedding_size", c.hidden_size);
  c.num_layers = j.at("num_hidden_layers").get<nn::Index>();
  c.num_heads = j.at("num_attention_heads").get<nn::Index>();
  c.intermediate_size = j.at("intermediate_size").get<nn::Index>();
  c.max_position = j.value("max_position_embeddings", nn::Index{512});
  c.type_vocab_size = j.value("type_vocab_size", nn::Index{2});
  c.layer_norm_eps = j.value("layer_norm_eps", 1e-12);
  c.hidden_dropout = j.value("hidden_dropout_prob", 0.1);
  c.attention_dropout = j.value("attention_probs_dropout_prob", 0.1);
  const std::string act = j.value("hidden_act", std::string("gelu"));
  if (act != "gelu") throw std::runtime_error("unsupported hidden_act '" + act + "' (only exact gelu)");
  if (c.hidden_size % c.num_heads != 0) throw std::runtime_error("hidden_size not divisible by heads");

  if (std::ifstream tin(dir / kTokenizerConfigFile); tin) {
    const nlohmann::json t = nlohmann::json::parse(tin);
    c.lowercase = t.value("do_lower_case", false);
  }
  return c;
}

}  // namespace bnhate::encoder
