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

#include "bnhate/textnorm/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bnhate/textnorm/unicode.hpp"

#ifndef BNHATE_DATA_DIR
#define BNHATE_DATA_DIR "data"
#endif

namespace bnhate::textnorm {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Returns true for blank and comment lines; records `# version: x`.
bool skip_line(const std::string& line, std::string& version) {
  const std::string t = trim(line);
  if (t.empty()) return true;
  if (t[0] != '#') return false;
  const std::string body = trim(std::string_view(t).substr(1));
  constexpr std::string_view kTag = "version:";
  if (body.rfind(kTag, 0) == 0) version = trim(std::string_view(body).substr(kTag.size()));
  return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) fields.push_back(field);
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

char32_t parse_code_point(const std::string& text, const std::string& source, std::size_t line) {
  std::string hex = trim(text);
  if (hex.rfind("U+", 0) == 0 || hex.rfind("u+", 0) == 0) hex = hex.substr(2);
  if (hex.empty() || hex.size() > 6 ||
      !std::all_of(hex.begin(), hex.end(), [](unsigned char c) { return std::isxdigit(c); })) {
    throw LexiconError(source, line, "expected a hexadecimal code point, got '" + text + "'");
  }
  const unsigned long value = std::stoul(hex, nullptr, 16);
  if (value > 0x10FFFF) throw LexiconError(source, line, "code point out of range: " + text);
  return static_cast<char32_t>(value);
}

std::ifstream open_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError(path.string(), 0, "cannot open table file");
  return in;
}

bool is_valid_gloss(const std::u32string& gloss) {
  if (gloss.empty() || gloss.front() == U' ' || gloss.back() == U' ') return false;
  bool prev_space = false;
  for (char32_t c : gloss) {
    if (c == U' ') {
      if (prev_space) return false;
      prev_space = true;
      continue;
    }
    prev_space = false;
    if (!is_bangla_script(c)) return false;
  }
  return true;
}

}  // namespace

LexiconError::LexiconError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

std::optional<std::string_view> GlossTable::lookup(std::u32string_view key) const {
  const auto it = entries_.find(std::u32string(key));
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second);
}

void GlossTable::parse(std::istream& in, const std::string& source, KeyKind kind) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_cr(raw);
    if (skip_line(line, version_)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw LexiconError(source, line_no, "expected 'key<TAB>gloss'");
    }
    const std::u32string key = to_u32(fields[0]);
    const std::u32string gloss = to_u32(fields[1]);
    if (key.empty()) throw LexiconError(source, line_no, "empty key");
    if (kind == KeyKind::kEmoji && !is_emoji_base(key.front())) {
      throw LexiconError(source, line_no, "key does not start with an emoji");
    }
    if (!is_valid_gloss(gloss)) {
      throw LexiconError(source, line_no, "gloss must be non-empty Bangla-script text");
    }
    if (nfc(fields[1]) != fields[1]) {
      throw LexiconError(source, line_no, "gloss is not in NFC");
    }
    if (!entries_.emplace(key, fields[1]).second) {
      throw LexiconError(source, line_no, "duplicate key");
    }
    max_key_length_ = std::max(max_key_length_, key.size());
  }
}

EmojiLexicon EmojiLexicon::load(const std::filesystem::path& path) {
  auto in = open_table(path);
  return parse(in, path.string());
}

EmojiLexicon EmojiLexicon::parse(std::istream& in, const std::string& source) {
  EmojiLexicon lex;
  lex.GlossTable::parse(in, source, KeyKind::kEmoji);
  return lex;
}

TermLexicon TermLexicon::load(const std::filesystem::path& path) {
  auto in = open_table(path);
  return parse(in, path.string());
}

TermLexicon TermLexicon::parse(std::istream& in, const std::string& source) {
  TermLexicon lex;
  lex.GlossTable::parse(in, source, KeyKind::kAny);
  return lex;
}

JoinerRules JoinerRules::load(const std::filesystem::path& path) {
  auto in = open_table(path);
  return parse(in, path.string());
}

JoinerRules JoinerRules::parse(std::istream& in, const std::string& source) {
  JoinerRules table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_cr(raw);
    if (skip_line(line, table.version_)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw LexiconError(source, line_no, "expected 'joiner<TAB>prev<TAB>next<TAB>keep|drop'");
    }
    Rule rule{};
    rule.joiner = parse_code_point(fields[0], source, line_no);
    if (!is_joiner(rule.joiner)) throw LexiconError(source, line_no, "not a ZWJ/ZWNJ code point");
    if (trim(fields[1]) != "*") rule.prev = parse_code_point(fields[1], source, line_no);
    if (trim(fields[2]) != "*") rule.next = parse_code_point(fields[2], source, line_no);
    const std::string action = trim(fields[3]);
    if (action == "keep") {
      rule.keep = true;
    } else if (action == "drop") {
      rule.keep = false;
    } else {
      throw LexiconError(source, line_no, "action must be 'keep' or 'drop'");
    }
    table.rules_.push_back(rule);
  }
  return table;
}

bool JoinerRules::keep(char32_t joiner, char32_t prev, char32_t next) const {
  for (const Rule& r : rules_) {
    if (r.joiner != joiner) continue;
    if (r.prev && *r.prev != prev) continue;
    if (r.next && *r.next != next) continue;
    return r.keep;
  }
  return true;
}

PunctuationSet PunctuationSet::load(const std::filesystem::path& path) {
  auto in = open_table(path);
  return parse(in, path.string());
}

PunctuationSet PunctuationSet::parse(std::istream& in, const std::string& source) {
  PunctuationSet set;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_cr(raw);
    if (skip_line(line, set.version_)) continue;
    // Allow a trailing comment after the code point.
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const char32_t c = parse_code_point(line, source, line_no);
    if (is_whitespace(c)) throw LexiconError(source, line_no, "whitespace is not punctuation");
    set.marks_.insert(c);
  }
  return set;
}

Resources Resources::load(const std::filesystem::path& dir,
                          const std::optional<std::filesystem::path>& emoji_override) {
  return Resources{
      EmojiLexicon::load(emoji_override.value_or(dir / kEmojiLexiconFile)),
      TermLexicon::load(dir / kTermLexiconFile),
      JoinerRules::load(dir / kJoinerRulesFile),
      PunctuationSet::load(dir / kPunctuationFile),
  };
}

const Resources& Resources::shipped() {
  static const Resources resources = Resources::load(default_data_dir());
  return resources;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("BNHATE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return BNHATE_DATA_DIR;
}

}  // namespace bnhate::textnorm
