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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bnhate/textnorm/normalizer.hpp"

namespace bnhate::encoder {

using TokenId = std::int32_t;

inline constexpr int kMaxSequenceLength = 128;

/// Fixed-length model input: ids right-padded to max length, mask = 1 for
/// real tokens (including the boundary tokens), then 0s.
struct TokenizedInput {
  std::vector<TokenId> token_ids;
  std::vector<std::uint8_t> mask;

  int length() const { return static_cast<int>(token_ids.size()); }
  /// Number of leading mask positions set to 1.
  int real_length() const;

  friend bool operator==(const TokenizedInput&, const TokenizedInput&) = default;
};

struct SpecialTokens {
  TokenId pad = 0;
  TokenId unk = 1;
  TokenId cls = 2;
  TokenId sep = 3;
};

/// Whitespace and punctuation splitting in the style of BERT's basic
/// tokenizer: control and format characters (including ZWJ/ZWNJ) are
/// dropped, every punctuation character becomes its own token, and
/// optionally text is lowercased with combining marks removed.
std::vector<std::string> basic_tokenize(std::string_view text, bool lowercase = false);

class Tokenizer {
 public:
  explicit Tokenizer(int max_length, SpecialTokens specials) : max_length_(max_length), specials_(specials) {}
  virtual ~Tokenizer() = default;

  /// Subword ids of `text` without boundary tokens.
  virtual std::vector<TokenId> pieces(std::string_view text) const = 0;

  /// [CLS] pieces [SEP], truncated to max_length, right-padded. Text that
  /// yields no pieces gives just the two boundary tokens plus a warning.
  TokenizedInput tokenize(const textnorm::NormalizedText& text) const;

  int max_length() const { return max_length_; }
  const SpecialTokens& specials() const { return specials_; }

 protected:
  TokenizedInput assemble(const std::vector<TokenId>& pieces) const;

 private:
  int max_length_;
  SpecialTokens specials_;
};

/// Vocabulary-free tokenizer for the stub backend: each basic token is
/// mapped to a bucket by FNV-1a, offset past the special ids.
class HashTokenizer : public Tokenizer {
 public:
  HashTokenizer(int max_length = kMaxSequenceLength, TokenId vocab_size = 32000);
  std::vector<TokenId> pieces(std::string_view text) const override;
  TokenId vocab_size() const { return vocab_size_; }

  static constexpr TokenId kFirstRegularId = 5;

 private:
  TokenId vocab_size_;
};

/// Greedy longest-match-first WordPiece over a `vocab.txt` (one token per
/// line, id = line index).
class WordPieceTokenizer : public Tokenizer {
 public:
  WordPieceTokenizer(std::unordered_map<std::string, TokenId> vocab, SpecialTokens specials,
                     bool lowercase, int max_length = kMaxSequenceLength);

  static WordPieceTokenizer from_vocab_file(const std::filesystem::path& path, bool lowercase,
                                            int max_length = kMaxSequenceLength);

  std::vector<TokenId> pieces(std::string_view text) const override;
  std::size_t vocab_size() const { return vocab_.size(); }

  static constexpr std::size_t kMaxCharsPerWord = 100;

 private:
  std::unordered_map<std::string, TokenId> vocab_;
  bool lowercase_;
};

}  // namespace bnhate::encoder
