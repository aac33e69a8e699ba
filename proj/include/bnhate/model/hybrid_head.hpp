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
#include <string>
#include <vector>

#include "bnhate/encoder/encoder.hpp"
#include "bnhate/model/config.hpp"
#include "bnhate/nn/layers.hpp"
#include "bnhate/rng.hpp"

namespace bnhate::model {

using nn::Index;

/// Attention weights of one branch: rows are query positions, columns are
/// key positions.
struct AttentionWeights {
  nn::Matrix<double> weights;
};

/// Classifier head over encoder outputs:
///   Bi-GRU -> LayerNorm -> self-attention -> masked mean        (2H)
///   Conv1d(k) -> ReLU -> max over tokens, per kernel -> concat
///     -> LayerNorm -> self-attention over the per-kernel vectors (|k|F)
///   concat -> Linear -> ReLU -> LayerNorm -> dropout -> Linear   (labels)
///
/// All graph methods take the unpadded [L x d_embed] token matrix; padded
/// positions never enter the computation, which is what makes the logits
/// independent of the amount of padding.
template <typename T>
class HybridHead {
 public:
  struct Branch {
    nn::Var<T> vec;
    nn::Matrix<T> attention;
  };

  explicit HybridHead(const ModelConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(derive_seed(cfg_.seed, {0x6865616Dull}));
    gru_ = nn::BiGru<T>("gru", cfg_.d_embed, cfg_.gru_hidden, cfg_.gru_layers, rng);
    gru_norm_ = nn::LayerNorm<T>("gru_norm", cfg_.gru_width());
    gru_attn_ = nn::SelfAttention<T>("gru_attn", cfg_.gru_width(), cfg_.attn_heads, rng);
    for (auto k : cfg_.cnn_kernels) {
      convs_.emplace_back("conv" + std::to_string(k), cfg_.d_embed, cfg_.cnn_filters, k, rng);
    }
    cnn_norm_ = nn::LayerNorm<T>("cnn_norm", cfg_.cnn_width());
    cnn_attn_ = nn::SelfAttention<T>("cnn_attn", cfg_.cnn_filters, cfg_.attn_heads, rng);
    fusion_ = nn::Linear<T>("fusion", cfg_.gru_width() + cfg_.cnn_width(), cfg_.fusion_dim, rng);
    fusion_norm_ = nn::LayerNorm<T>("fusion_norm", cfg_.fusion_dim);
    output_ = nn::Linear<T>("classifier", cfg_.fusion_dim, cfg_.num_labels, rng);
  }

  // Parameters live in shared nodes; a copy would alias them.
  HybridHead(const HybridHead&) = delete;
  HybridHead& operator=(const HybridHead&) = delete;
  HybridHead(HybridHead&&) = default;
  HybridHead& operator=(HybridHead&&) = default;

  const ModelConfig& config() const { return cfg_; }

  Branch bigru_branch(nn::Graph<T>& g, const nn::Var<T>& x) const {
    check_width(x);
    const auto states = gru_norm_(g, gru_(g, x));
    auto att = gru_attn_(g, states);
    return {g.mean_rows(att.output), std::move(att.weights.front())};
  }

  Branch cnn_branch(nn::Graph<T>& g, const nn::Var<T>& x) const {
    check_width(x);
    std::vector<nn::Var<T>> pooled;
    for (const auto& conv : convs_) pooled.push_back(g.max_rows(g.relu(conv(g, x))));
    const auto normed = cnn_norm_(g, g.concat_cols(pooled));
    // One token per kernel size, each cnn_filters wide.
    const auto tokens = g.reshape(normed, static_cast<Index>(convs_.size()), cfg_.cnn_filters);
    auto att = cnn_attn_(g, tokens);
    return {g.reshape(att.output, 1, cfg_.cnn_width()), std::move(att.weights.front())};
  }

  nn::Var<T> fuse(nn::Graph<T>& g, const nn::Var<T>& gru_vec, const nn::Var<T>& cnn_vec, bool training,
                  Rng& rng) const {
    if (gru_vec.cols() != cfg_.gru_width() || cnn_vec.cols() != cfg_.cnn_width()) {
      throw ShapeMismatch("fuse: branch vector widths do not match the configuration");
    }
    auto f = fusion_norm_(g, g.relu(fusion_(g, g.concat_cols({gru_vec, cnn_vec}))));
    return training ? nn::dropout(g, f, cfg_.dropout, rng) : f;
  }

  nn::Var<T> classify(nn::Graph<T>& g, const nn::Var<T>& fused) const { return output_(g, fused); }

  /// Logits [1 x num_labels] for one unpadded token matrix.
  nn::Var<T> forward(nn::Graph<T>& g, nn::Var<T> x, bool training, Rng& rng) const {
    if (training) x = nn::dropout(g, x, cfg_.dropout, rng);
    const Branch gru = bigru_branch(g, x);
    const Branch cnn = cnn_branch(g, x);
    return classify(g, fuse(g, gru.vec, cnn.vec, training, rng));
  }

  nn::ParameterList<T> parameters() {
    nn::ParameterList<T> out;
    gru_.collect(out);
    gru_norm_.collect(out);
    gru_attn_.collect(out);
    for (auto& c : convs_) c.collect(out);
    cnn_norm_.collect(out);
    cnn_attn_.collect(out);
    fusion_.collect(out);
    fusion_norm_.collect(out);
    output_.collect(out);
    return out;
  }

 private:
  void check_width(const nn::Var<T>& x) const {
    if (x.cols() != cfg_.d_embed) {
      throw ShapeMismatch("embedding width " + std::to_string(x.cols()) + " != d_embed " +
                          std::to_string(cfg_.d_embed));
    }
    if (x.rows() == 0) throw ShapeMismatch("empty token sequence");
  }

  ModelConfig cfg_;
  nn::BiGru<T> gru_;
  nn::LayerNorm<T> gru_norm_;
  nn::SelfAttention<T> gru_attn_;
  std::vector<nn::Conv1d<T>> convs_;
  nn::LayerNorm<T> cnn_norm_;
  nn::SelfAttention<T> cnn_attn_;
  nn::Linear<T> fusion_;
  nn::LayerNorm<T> fusion_norm_;
  nn::Linear<T> output_;
};

/// Unpadded prefix of a padded sequence as a graph constant. The mask must be
/// a run of 1s followed by 0s with at least one real position.
template <typename T>
nn::Var<T> real_tokens(nn::Graph<T>& g, const encoder::EmbeddingSequence& e) {
  const int L = e.real_length();
  for (std::size_t i = static_cast<std::size_t>(L); i < e.mask.size(); ++i) {
    if (e.mask[i]) throw ShapeMismatch("mask is not right-padded");
  }
  if (L == 0) throw ShapeMismatch("sequence has no real tokens");
  if (e.vectors.rows() != static_cast<Index>(e.mask.size())) throw ShapeMismatch("mask/vector length mismatch");
  return g.constant(e.vectors.topRows(L).template cast<T>());
}

struct BranchResult {
  std::vector<double> vec;
  AttentionWeights attention;
};

/// Evaluation-mode Bi-GRU branch on a padded sequence. Attention is reported
/// as [real x padded length] with zero weight on padded key columns.
template <typename T>
BranchResult bigru_branch(const HybridHead<T>& head, const encoder::EmbeddingSequence& e) {
  nn::Graph<T> g(false);
  const auto b = head.bigru_branch(g, real_tokens<T>(g, e));
  BranchResult r;
  r.vec.assign(b.vec.value().data(), b.vec.value().data() + b.vec.value().size());
  r.attention.weights = nn::Matrix<double>::Zero(b.attention.rows(), static_cast<Index>(e.mask.size()));
  r.attention.weights.leftCols(b.attention.cols()) = b.attention.template cast<double>();
  return r;
}

/// Evaluation-mode CNN branch; attention is over the per-kernel tokens.
template <typename T>
BranchResult cnn_branch(const HybridHead<T>& head, const encoder::EmbeddingSequence& e) {
  nn::Graph<T> g(false);
  const auto b = head.cnn_branch(g, real_tokens<T>(g, e));
  BranchResult r;
  r.vec.assign(b.vec.value().data(), b.vec.value().data() + b.vec.value().size());
  r.attention.weights = b.attention.template cast<double>();
  return r;
}

}  // namespace bnhate::model
