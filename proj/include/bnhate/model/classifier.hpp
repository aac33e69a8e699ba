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

#include <memory>
#include <vector>

#include "bnhate/encoder/encoder.hpp"
#include "bnhate/model/hybrid_head.hpp"
#include "bnhate/textnorm/normalizer.hpp"

namespace bnhate::model {

/// Encoder backend plus hybrid head: tokenize -> encode -> both branches ->
/// fuse -> classify. Each example is processed on its own, so a batch never
/// changes any example's logits.
template <typename T>
class Classifier {
 public:
  Classifier(std::unique_ptr<encoder::EncoderBackend<T>> backend, const ModelConfig& cfg)
      : backend_(std::move(backend)), head_(cfg) {
    if (backend_->width() != cfg.d_embed) {
      throw ShapeMismatch("encoder width " + std::to_string(backend_->width()) + " != d_embed " +
                          std::to_string(cfg.d_embed));
    }
  }

  const encoder::EncoderBackend<T>& backend() const { return *backend_; }
  encoder::EncoderBackend<T>& backend() { return *backend_; }
  const HybridHead<T>& head() const { return head_; }
  HybridHead<T>& head() { return head_; }
  const ModelConfig& config() const { return head_.config(); }

  encoder::TokenizedInput tokenize(const textnorm::NormalizedText& text) const {
    return backend_->tokenizer().tokenize(text);
  }

  nn::Var<T> logits(nn::Graph<T>& g, const encoder::TokenizedInput& input, bool training, Rng& rng) const {
    return head_.forward(g, backend_->embed(g, input, training, rng), training, rng);
  }

  /// Evaluation-mode logits for pre-tokenized inputs.
  std::vector<std::vector<double>> forward_tokens(const std::vector<encoder::TokenizedInput>& batch) const {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    Rng unused(0);
    for (const auto& input : batch) {
      nn::Graph<T> g(false);
      const auto z = logits(g, input, false, unused);
      out.emplace_back(z.value().data(), z.value().data() + z.value().size());
    }
    return out;
  }

  std::vector<std::vector<double>> forward(const std::vector<textnorm::NormalizedText>& batch) const {
    std::vector<encoder::TokenizedInput> tokens;
    tokens.reserve(batch.size());
    for (const auto& t : batch) tokens.push_back(tokenize(t));
    return forward_tokens(tokens);
  }

  /// Head parameters followed by the encoder's (when it has any).
  nn::ParameterList<T> parameters() {
    nn::ParameterList<T> out = head_.parameters();
    backend_->collect(out);
    return out;
  }

  nn::ParameterList<T> trainable_parameters() {
    nn::ParameterList<T> out;
    for (auto* p : parameters()) {
      if (p->trainable()) out.push_back(p);
    }
    return out;
  }

 private:
  std::unique_ptr<encoder::EncoderBackend<T>> backend_;
  HybridHead<T> head_;
};

}  // namespace bnhate::model
