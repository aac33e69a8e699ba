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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bnhate/encoder/backend_error.hpp"
#include "bnhate/encoder/tokenizer.hpp"
#include "bnhate/nn/graph.hpp"
#include "bnhate/rng.hpp"

namespace bnhate::encoder {

enum class EncoderKind { kPretrained, kStub };

std::string to_string(EncoderKind kind);
std::optional<EncoderKind> parse_encoder_kind(std::string_view text);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::kPretrained;
  /// Checkpoint name for the pretrained backend, decimal seed for the stub.
  std::string identifier = "csebuetnlp/banglabert";
  /// Directory holding config.json, vocab.txt and model.safetensors.
  std::filesystem::path weights_dir;
  bool trainable = true;
  int max_seq_len = kMaxSequenceLength;
  TokenId stub_vocab_size = 32000;
};

/// Per-token vectors [max_len x D] and the padding mask. Masked rows are zero.
struct EmbeddingSequence {
  nn::Matrix<float> vectors;
  std::vector<std::uint8_t> mask;

  int real_length() const;
};

/// Deterministic hash embedding: entry (i, j) is a function of
/// (token_ids[i], i, seed, j) only, mapped into [-1, 1).
EmbeddingSequence stub_embed(const TokenizedInput& ids, std::uint64_t seed, nn::Index width);

/// Single stub entry, exposed for tests.
double stub_value(TokenId token, std::int64_t position, std::uint64_t seed, std::int64_t channel);

template <typename T>
nn::Matrix<T> stub_rows(const TokenizedInput& ids, std::uint64_t seed, nn::Index width, nn::Index rows) {
  nn::Matrix<T> m(rows, width);
  for (nn::Index i = 0; i < rows; ++i) {
    for (nn::Index j = 0; j < width; ++j) {
      m(i, j) = static_cast<T>(stub_value(ids.token_ids[static_cast<std::size_t>(i)], i, seed, j));
    }
  }
  return m;
}

/// Source of contextual token vectors for the classifier head.
template <typename T>
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual EncoderKind kind() const = 0;
  virtual std::string identifier() const = 0;
  virtual nn::Index width() const = 0;
  virtual const Tokenizer& tokenizer() const = 0;

  /// Vectors for the unpadded prefix of `input`, [real_length x width].
  /// Draws dropout noise from `rng` when `training` is set.
  virtual nn::Var<T> embed(nn::Graph<T>& g, const TokenizedInput& input, bool training, Rng& rng) const = 0;

  /// Trainable encoder parameters (none for the stub).
  virtual void collect(nn::ParameterList<T>& /*out*/) {}
  virtual bool trainable() const { return false; }
};

template <typename T>
class StubBackend final : public EncoderBackend<T> {
 public:
  StubBackend(std::uint64_t seed, nn::Index width, int max_len = kMaxSequenceLength,
              TokenId vocab_size = 32000)
      : seed_(seed), width_(width), tokenizer_(max_len, vocab_size) {}

  EncoderKind kind() const override { return EncoderKind::kStub; }
  std::string identifier() const override { return std::to_string(seed_); }
  nn::Index width() const override { return width_; }
  const Tokenizer& tokenizer() const override { return tokenizer_; }
  std::uint64_t seed() const { return seed_; }

  nn::Var<T> embed(nn::Graph<T>& g, const TokenizedInput& input, bool, Rng&) const override {
    return g.constant(stub_rows<T>(input, seed_, width_, input.real_length()));
  }

 private:
  std::uint64_t seed_;
  nn::Index width_;
  HashTokenizer tokenizer_;
};

/// Runs `backend` without gradients and pads each result to the full
/// sequence length with zero rows.
std::vector<EmbeddingSequence> encode(const std::vector<TokenizedInput>& batch,
                                      const EncoderBackend<float>& backend);

}  // namespace bnhate::encoder
