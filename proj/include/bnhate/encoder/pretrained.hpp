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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bnhate/encoder/encoder.hpp"
#include "bnhate/nn/layers.hpp"
#include "bnhate/nn/safetensors.hpp"

namespace bnhate::encoder {

/// Hyperparameters read from a Hugging Face style `config.json` of a BERT or
/// ELECTRA encoder.
struct TransformerConfig {
  nn::Index vocab_size = 0;
  nn::Index hidden_size = 0;
  nn::Index embedding_size = 0;  // differs from hidden_size for small ELECTRA models
  nn::Index num_layers = 0;
  nn::Index num_heads = 0;
  nn::Index intermediate_size = 0;
  nn::Index max_position = 0;
  nn::Index type_vocab_size = 0;
  double layer_norm_eps = 1e-12;
  double hidden_dropout = 0.1;
  double attention_dropout = 0.1;
  bool lowercase = false;
};

/// Files a pretrained directory must contain.
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kVocabFile = "vocab.txt";
inline constexpr const char* kWeightsFile = "model.safetensors";
inline constexpr const char* kTokenizerConfigFile = "tokenizer_config.json";

/// Parses config.json (and tokenizer_config.json when present).
TransformerConfig load_transformer_config(const std::filesystem::path& dir);

/// Throws BackendUnavailable naming the first missing file.
void require_pretrained_files(const std::filesystem::path& dir);

/// Looks up `name`, checks its shape, and copies it into a matrix of the
/// given dimensions.
template <typename T>
nn::Matrix<T> take_tensor(const nn::TensorFile& file, const std::string& name, nn::Index rows, nn::Index cols) {
  const auto it = file.tensors.find(name);
  if (it == file.tensors.end()) throw std::runtime_error("pretrained weights lack tensor " + name);
  const auto& t = it->second;
  if (t.numel() != rows * cols) throw std::runtime_error("tensor " + name + " has unexpected shape");
  return Eigen::Map<const nn::Matrix<float>>(t.data.data(), rows, cols).template cast<T>();
}

/// Post-LayerNorm transformer encoder (BERT / ELECTRA discriminator) with
/// weights in Hugging Face naming. Returns the last layer's hidden states.
template <typename T>
class TransformerBackend final : public EncoderBackend<T> {
 public:
  struct Layer {
    nn::Linear<T> query, key, value, attn_out;
    nn::LayerNorm<T> attn_norm;
    nn::Linear<T> intermediate, output;
    nn::LayerNorm<T> out_norm;
  };

  TransformerBackend(const EncoderConfig& cfg, const std::filesystem::path& dir)
      : identifier_(cfg.identifier), trainable_(cfg.trainable) {
    require_pretrained_files(dir);
    tc_ = load_transformer_config(dir);
    tokenizer_ = std::make_unique<WordPieceTokenizer>(
        WordPieceTokenizer::from_vocab_file(dir / kVocabFile, tc_.lowercase, cfg.max_seq_len));
    if (cfg.max_seq_len > tc_.max_position) {
      throw std::invalid_argument("max_seq_len exceeds the encoder's position table");
    }
    const nn::TensorFile file = nn::read_tensor_file(dir / kWeightsFile);
    load(file);
    for (auto* p : params()) p->set_trainable(trainable_);
  }

  EncoderKind kind() const override { return EncoderKind::kPretrained; }
  std::string identifier() const override { return identifier_; }
  nn::Index width() const override { return tc_.hidden_size; }
  const Tokenizer& tokenizer() const override { return *tokenizer_; }
  bool trainable() const override { return trainable_; }
  const TransformerConfig& transformer_config() const { return tc_; }

  void collect(nn::ParameterList<T>& out) override {
    for (auto* p : params()) out.push_back(p);
  }

  nn::Var<T> embed(nn::Graph<T>& g, const TokenizedInput& input, bool training, Rng& rng) const override {
    const int L = input.real_length();
    if (L == 0) throw std::invalid_argument("empty token sequence");
    std::vector<nn::Index> ids(static_cast<std::size_t>(L)), pos(static_cast<std::size_t>(L)),
        types(static_cast<std::size_t>(L), 0);
    for (int i = 0; i < L; ++i) {
      ids[static_cast<std::size_t>(i)] = input.token_ids[static_cast<std::size_t>(i)];
      pos[static_cast<std::size_t>(i)] = i;
    }
    nn::Var<T> x = g.add(g.add(g.gather_rows(word_.var(), std::move(ids)), g.gather_rows(position_.var(), std::move(pos))),
                         g.gather_rows(token_type_.var(), std::move(types)));
    x = embed_norm_(g, x);
    if (training) x = nn::dropout(g, x, tc_.hidden_dropout, rng);
    if (project_) x = (*project_)(g, x);

    const nn::Index heads = tc_.num_heads;
    const nn::Index dh = tc_.hidden_size / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    for (const Layer& layer : layers_) {
      const auto q = layer.query(g, x);
      const auto k = layer.key(g, x);
      const auto v = layer.value(g, x);
      std::vector<nn::Var<T>> ctx;
      for (nn::Index h = 0; h < heads; ++h) {
        auto a = g.masked_softmax(g.scale(g.matmul_nt(g.slice_cols(q, h * dh, dh), g.slice_cols(k, h * dh, dh)), scale));
        if (training) a = nn::dropout(g, a, tc_.attention_dropout, rng);
        ctx.push_back(g.matmul(a, g.slice_cols(v, h * dh, dh)));
      }
      auto attn = layer.attn_out(g, g.concat_cols(ctx));
      if (training) attn = nn::dropout(g, attn, tc_.hidden_dropout, rng);
      x = layer.attn_norm(g, g.add(x, attn));
      auto ff = layer.output(g, g.gelu(layer.intermediate(g, x)));
      if (training) ff = nn::dropout(g, ff, tc_.hidden_dropout, rng);
      x = layer.out_norm(g, g.add(x, ff));
    }
    return x;
  }

 private:
  std::vector<nn::Parameter<T>*> params() {
    std::vector<nn::Parameter<T>*> out{&word_, &position_, &token_type_};
    embed_norm_.collect(out);
    if (project_) project_->collect(out);
    for (auto& l : layers_) {
      l.query.collect(out);
      l.key.collect(out);
      l.value.collect(out);
      l.attn_out.collect(out);
      l.attn_norm.collect(out);
      l.intermediate.collect(out);
      l.output.collect(out);
      l.out_norm.collect(out);
    }
    return out;
  }

  static std::string find_prefix(const nn::TensorFile& file) {
    constexpr std::string_view kSuffix = "embeddings.word_embeddings.weight";
    for (const auto& [name, t] : file.tensors) {
      if (name.size() >= kSuffix.size() && name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
        const std::string prefix = name.substr(0, name.size() - kSuffix.size());
        if (prefix.find("generator") == std::string::npos) return prefix;
      }
    }
    throw std::runtime_error("pretrained weights lack embeddings.word_embeddings.weight");
  }

  nn::Parameter<T> param(const nn::TensorFile& file, const std::string& prefix, const std::string& name,
                         nn::Index rows, nn::Index cols) {
    return nn::Parameter<T>("encoder." + name, take_tensor<T>(file, prefix + name, rows, cols));
  }

  nn::Linear<T> linear(const nn::TensorFile& file, const std::string& prefix, const std::string& name,
                       nn::Index in, nn::Index out) {
    nn::Linear<T> l;
    l.weight = param(file, prefix, name + ".weight", out, in);
    l.bias = param(file, prefix, name + ".bias", 1, out);
    return l;
  }

  nn::LayerNorm<T> layer_norm(const nn::TensorFile& file, const std::string& prefix, const std::string& name,
                              nn::Index width) {
    nn::LayerNorm<T> ln;
    const bool legacy = file.tensors.count(prefix + name + ".gamma") != 0;
    ln.gamma = nn::Parameter<T>("encoder." + name + ".weight",
                                take_tensor<T>(file, prefix + name + (legacy ? ".gamma" : ".weight"), 1, width));
    ln.beta = nn::Parameter<T>("encoder." + name + ".bias",
                               take_tensor<T>(file, prefix + name + (legacy ? ".beta" : ".bias"), 1, width));
    ln.eps = static_cast<T>(tc_.layer_norm_eps);
    return ln;
  }

  void load(const nn::TensorFile& file) {
    const std::string p = find_prefix(file);
    const nn::Index E = tc_.embedding_size;
    const nn::Index H = tc_.hidden_size;
    word_ = param(file, p, "embeddings.word_embeddings.weight", tc_.vocab_size, E);
    position_ = param(file, p, "embeddings.position_embeddings.weight", tc_.max_position, E);
    token_type_ = param(file, p, "embeddings.token_type_embeddings.weight", tc_.type_vocab_size, E);
    embed_norm_ = layer_norm(file, p, "embeddings.LayerNorm", E);
    if (E != H) project_ = linear(file, p, "embeddings_project", E, H);
    for (nn::Index i = 0; i < tc_.num_layers; ++i) {
      const std::string base = "encoder.layer." + std::to_string(i) + ".";
      Layer l;
      l.query = linear(file, p, base + "attention.self.query", H, H);
      l.key = linear(file, p, base + "attention.self.key", H, H);
      l.value = linear(file, p, base + "attention.self.value", H, H);
      l.attn_out = linear(file, p, base + "attention.output.dense", H, H);
      l.attn_norm = layer_norm(file, p, base + "attention.output.LayerNorm", H);
      l.intermediate = linear(file, p, base + "intermediate.dense", H, tc_.intermediate_size);
      l.output = linear(file, p, base + "output.dense", tc_.intermediate_size, H);
      l.out_norm = layer_norm(file, p, base + "output.LayerNorm", H);
      layers_.push_back(std::move(l));
    }
  }

  std::string identifier_;
  bool trainable_;
  TransformerConfig tc_;
  std::unique_ptr<WordPieceTokenizer> tokenizer_;
  nn::Parameter<T> word_, position_, token_type_;
  nn::LayerNorm<T> embed_norm_;
  std::optional<nn::Linear<T>> project_;
  std::vector<Layer> layers_;
};

/// Builds the backend named by `cfg`. The stub uses `width` as its vector
/// width; the pretrained backend must report the same width.
template <typename T>
std::unique_ptr<EncoderBackend<T>> make_backend(const EncoderConfig& cfg, nn::Index width) {
  if (cfg.kind == EncoderKind::kStub) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(cfg.identifier);
    } catch (const std::exception&) {
      throw std::invalid_argument("stub encoder identifier must be an unsigned integer seed, got '" +
                                  cfg.identifier + "'");
    }
    return std::make_unique<StubBackend<T>>(seed, width, cfg.max_seq_len, cfg.stub_vocab_size);
  }
  if (cfg.weights_dir.empty()) throw BackendUnavailable("encoder.weights_dir (not configured)");
  auto backend = std::make_unique<TransformerBackend<T>>(cfg, cfg.weights_dir);
  if (backend->width() != width) {
    throw std::invalid_argument("model d_embed " + std::to_string(width) + " does not match encoder width " +
                                std::to_string(backend->width()));
  }
  return backend;
}

}  // namespace bnhate::encoder
