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

#include <string>
#include <string_view>

#include "bnhate/textnorm/lexicon.hpp"

namespace bnhate::textnorm {

// Individual pipeline rules. Each takes and returns UTF-8. A rule that
// rewrites nothing returns its input unchanged; a rule that does rewrite
// collapses whitespace runs to one space and trims the ends.

/// Deletes every whitespace-delimited token containing `scheme://` or
/// starting with `www.` (ASCII, case-insensitive).
std::string strip_urls(std::string_view text);

/// Lowercases A-Z only.
std::string lowercase_latin(std::string_view text);

/// Replaces each emoji sequence by its gloss padded with spaces. Emoji
/// without a lexicon entry are removed.
std::string emoji_to_bangla(std::string_view text, const EmojiLexicon& lexicon);

/// Deletes commas that sit directly between two digits (ASCII or Bangla).
std::string merge_comma_numbers(std::string_view text);

/// NFC, then optional ZWJ/ZWNJ removal and Bangla punctuation removal,
/// then NFC again.
std::string canonical_normalize(std::string_view text, const JoinerRules& joiners,
                                const PunctuationSet& punctuation);
std::string canonical_normalize(std::string_view text);

/// Replaces `%` with the Bangla term from the term lexicon.
std::string replace_percent(std::string_view text, const TermLexicon& terms);
std::string replace_percent(std::string_view text);

/// True when some whitespace-delimited token of `text` is a URL as defined
/// by strip_urls.
bool contains_url(std::string_view text);

/// Output of the composite normalizer. Only Normalizer can construct one.
class NormalizedText {
 public:
  const std::string& value() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }
  friend bool operator==(const NormalizedText&, const NormalizedText&) = default;

 private:
  friend class Normalizer;
  explicit NormalizedText(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

/// The composite pipeline: strip_urls, lowercase_latin, emoji_to_bangla,
/// merge_comma_numbers, canonical_normalize, replace_percent, whitespace
/// collapse. Immutable after construction and safe to share across threads.
class Normalizer {
 public:
  explicit Normalizer(Resources resources);
  /// Uses the shipped tables.
  Normalizer();

  NormalizedText normalize(std::string_view raw) const;

  /// One application of the rule sequence, without the fixed-point loop.
  std::string apply_once(std::string_view raw) const;

  const Resources& resources() const { return resources_; }

  /// Upper bound on pipeline passes. A second pass is only needed when a
  /// late rule exposes input for an earlier one (e.g. a dropped joiner that
  /// glues `www` to `.com`, or NFC turning U+212A KELVIN SIGN into `K`).
  static constexpr int kMaxPasses = 4;

 private:
  Resources resources_;
};

}  // namespace bnhate::textnorm
