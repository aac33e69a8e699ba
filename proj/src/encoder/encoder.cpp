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

#include "bnhate/encoder/encoder.hpp"

#include <stdexcept>

namespace bnhate::encoder {

std::string to_string(EncoderKind kind) { return kind == EncoderKind::kStub ? "stub" : "pretrained"; }

std::optional<EncoderKind> parse_encoder_kind(std::string_view text) {
  if (text == "stub") return EncoderKind::kStub;
  if (text == "pretrained") return EncoderKind::kPretrained;
  return std::nullopt;
}

int EmbeddingSequence::real_length() const {
  int n = 0;
  while (n < static_cast<int>(mask.size()) && mask[static_cast<std::size_t>(n)]) ++n;
  return n;
}

double stub_value(TokenId token, std::int64_t position, std::uint64_t seed, std::int64_t channel) {
  const std::uint64_t h = derive_seed(seed, {static_cast<std::uint64_t>(static_cast<std::uint32_t>(token)),
                                             static_cast<std::uint64_t>(position),
                                             static_cast<std::uint64_t>(channel)});
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

EmbeddingSequence stub_embed(const TokenizedInput& ids, std::uint64_t seed, nn::Index width) {
  EmbeddingSequence out;
  out.mask = ids.mask;
  out.vectors = nn::Matrix<float>::Zero(ids.length(), width);
  for (int i = 0; i < ids.length(); ++i) {
    if (!ids.mask[static_cast<std::size_t>(i)]) continue;
    for (nn::Index j = 0; j < width; ++j) {
      out.vectors(i, j) = static_cast<float>(stub_value(ids.token_ids[static_cast<std::size_t>(i)], i, seed, j));
    }
  }
  return out;
}

std::vector<EmbeddingSequence> encode(const std::vector<TokenizedInput>& batch,
                                      const EncoderBackend<float>& backend) {
  if (batch.empty()) throw std::invalid_argument("encode: empty batch");
  std::vector<EmbeddingSequence> out;
  out.reserve(batch.size());
  Rng unused(0);
  for (const TokenizedInput& input : batch) {
    if (input.length() != batch.front().length()) throw std::invalid_argument("encode: ragged batch");
    nn::Graph<float> g(false);
    const nn::Var<float> real = backend.embed(g, input, false, unused);
    EmbeddingSequence seq;
    seq.mask = input.mask;
    seq.vectors = nn::Matrix<float>::Zero(input.length(), backend.width());
    seq.vectors.topRows(real.rows()) = real.value();
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace bnhate::encoder
