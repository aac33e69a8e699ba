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

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnhate::textnorm {

/// Raised when a shipped or user-supplied table cannot be parsed. Carries the
/// source name and the 1-based line number of the offending line (0 when the
/// problem is not tied to one line, e.g. an unreadable file).
class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Tab-separated `key<TAB>gloss` table with `#` comments. A comment of the
/// form `# version: <v>` sets the table version.
class GlossTable {
 public:
  std::optional<std::string_view> lookup(std::u32string_view key) const;
  const std::map<std::u32string, std::string>& entries() const { return entries_; }
  const std::string& version() const { return version_; }
  std::size_t max_key_length() const { return max_key_length_; }
  std::size_t size() const { return entries_.size(); }

 protected:
  enum class KeyKind { kEmoji, kAny };
  void parse(std::istream& in, const std::string& source, KeyKind kind);

 private:
  std::map<std::u32string, std::string> entries_;
  std::string version_;
  std::size_t max_key_length_ = 0;
};

/// Emoji code point sequence -> Bangla gloss.
class EmojiLexicon : public GlossTable {
 public:
  static EmojiLexicon load(const std::filesystem::path& path);
  static EmojiLexicon parse(std::istream& in, const std::string& source);
};

/// Symbol -> Bangla term (e.g. the percent sign).
class TermLexicon : public GlossTable {
 public:
  static TermLexicon load(const std::filesystem::path& path);
  static TermLexicon parse(std::istream& in, const std::string& source);
};

/// Context rules deciding whether a ZWJ/ZWNJ is orthographically required.
/// Rows are `joiner<TAB>prev<TAB>next<TAB>keep|drop`, code points in hex, `*`
/// as a wildcard; the first matching row wins and an unmatched joiner is kept.
class JoinerRules {
 public:
  struct Rule {
    char32_t joiner;
    std::optional<char32_t> prev;
    std::optional<char32_t> next;
    bool keep;
  };

  static JoinerRules load(const std::filesystem::path& path);
  static JoinerRules parse(std::istream& in, const std::string& source);

  static bool is_joiner(char32_t c) { return c == 0x200C || c == 0x200D; }

  // prev/next are 0 at the string boundaries.
  bool keep(char32_t joiner, char32_t prev, char32_t next) const;
  const std::vector<Rule>& rules() const { return rules_; }
  const std::string& version() const { return version_; }

 private:
  std::vector<Rule> rules_;
  std::string version_;
};

/// One code point per line (`U+0964` or `0964`).
class PunctuationSet {
 public:
  static PunctuationSet load(const std::filesystem::path& path);
  static PunctuationSet parse(std::istream& in, const std::string& source);

  bool contains(char32_t c) const { return marks_.count(c) != 0; }
  const std::set<char32_t>& marks() const { return marks_; }
  const std::string& version() const { return version_; }

 private:
  std::set<char32_t> marks_;
  std::string version_;
};

/// Every table the composite normalizer needs.
struct Resources {
  EmojiLexicon emoji;
  TermLexicon terms;
  JoinerRules joiners;
  PunctuationSet punctuation;

  /// Loads the tables from `dir`; `emoji_override` replaces the emoji lexicon.
  static Resources load(const std::filesystem::path& dir,
                        const std::optional<std::filesystem::path>& emoji_override = std::nullopt);
  /// Tables shipped with the build (`BNHATE_DATA_DIR` env var overrides).
  static const Resources& shipped();
};

std::filesystem::path default_data_dir();

inline constexpr const char* kEmojiLexiconFile = "emoji_lexicon.tsv";
inline constexpr const char* kTermLexiconFile = "term_lexicon.tsv";
inline constexpr const char* kJoinerRulesFile = "joiner_rules.tsv";
inline constexpr const char* kPunctuationFile = "bangla_punctuation.txt";

}  // namespace bnhate::textnorm
