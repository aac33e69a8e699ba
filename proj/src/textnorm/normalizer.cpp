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

#include "bnhate/textnorm/normalizer.hpp"

#include <regex>
#include <stdexcept>

#include "bnhate/textnorm/unicode.hpp"

namespace bnhate::textnorm {
namespace {

// ASCII-only pattern, safe to run over UTF-8 bytes.
const std::regex& url_pattern() {
  static const std::regex re(R"((^|[^A-Za-z0-9])([A-Za-z][A-Za-z0-9+.\-]*://|[Ww][Ww][Ww]\.))",
                             std::regex::ECMAScript | std::regex::optimize);
  return re;
}

bool is_url_token(std::string_view token) {
  return std::regex_search(token.begin(), token.end(), url_pattern());
}

template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  const std::u32string cps = to_u32(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_whitespace(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !is_whitespace(cps[j])) ++j;
    fn(to_utf8(std::u32string_view(cps).substr(i, j - i)));
    i = j;
  }
}

bool is_digit(char32_t c) { return is_ascii_digit(c) || is_bangla_digit(c); }

std::u32string strip_emoji_modifiers(std::u32string_view seq) {
  std::u32string out;
  for (char32_t c : seq) {
    if (c == 0xFE0F || (c >= 0x1F3FB && c <= 0x1F3FF)) continue;
    out.push_back(c);
  }
  return out;
}

// Length of the emoji sequence starting at `i` (0 if none): a base followed
// by continuations, ZWJ-chained bases, or a regional-indicator pair.
std::size_t emoji_sequence_length(const std::u32string& s, std::size_t i) {
  if (i >= s.size() || !is_emoji_base(s[i])) return 0;
  const auto regional = [](char32_t c) { return c >= 0x1F1E6 && c <= 0x1F1FF; };
  if (regional(s[i])) {
    return (i + 1 < s.size() && regional(s[i + 1])) ? 2 : 1;
  }
  std::size_t j = i + 1;
  while (j < s.size()) {
    if (is_emoji_continuation(s[j])) {
      ++j;
    } else if (s[j] == 0x200D && j + 1 < s.size() && is_emoji_base(s[j + 1])) {
      j += 2;
    } else {
      break;
    }
  }
  return j - i;
}

}  // namespace

bool contains_url(std::string_view text) {
  bool found = false;
  for_each_token(text, [&](const std::string& token) { found = found || is_url_token(token); });
  return found;
}

std::string strip_urls(std::string_view text) {
  std::string out;
  bool removed = false;
  for_each_token(text, [&](const std::string& token) {
    if (is_url_token(token)) {
      removed = true;
      return;
    }
    if (!out.empty()) out.push_back(' ');
    out += token;
  });
  return removed ? out : std::string(text);
}

std::string lowercase_latin(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string emoji_to_bangla(std::string_view text, const EmojiLexicon& lexicon) {
  const std::u32string s = to_u32(text);
  std::u32string out;
  bool changed = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t n = emoji_sequence_length(s, i);
    if (n == 0) {
      // Stray presentation selectors, keycaps and modifiers go with the emoji.
      if (is_emoji_continuation(s[i])) {
        changed = true;
      } else {
        out.push_back(s[i]);
      }
      ++i;
      continue;
    }
    changed = true;
    // Longest lexicon key that is a prefix of the sequence, then the same
    // search with presentation selectors and skin tones removed.
    std::u32string_view seq(s.data() + i, n);
    std::optional<std::string_view> gloss;
    for (std::size_t len = std::min(n, lexicon.max_key_length()); len > 0 && !gloss; --len) {
      gloss = lexicon.lookup(seq.substr(0, len));
    }
    if (!gloss) {
      const std::u32string bare = strip_emoji_modifiers(seq);
      gloss = lexicon.lookup(bare);
      if (!gloss && !bare.empty()) gloss = lexicon.lookup(bare.substr(0, 1));
    }
    out.push_back(U' ');
    if (gloss) {
      out += to_u32(*gloss);
      out.push_back(U' ');
    }
    i += n;
  }
  return changed ? to_utf8(collapse_whitespace(out)) : std::string(text);
}

std::string merge_comma_numbers(std::string_view text) {
  const std::u32string s = to_u32(text);
  std::u32string out;
  out.reserve(s.size());
  bool changed = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == U',' && i > 0 && i + 1 < s.size() && is_digit(s[i - 1]) && is_digit(s[i + 1])) {
      changed = true;
      continue;
    }
    out.push_back(s[i]);
  }
  return changed ? to_utf8(out) : std::string(text);
}

std::string canonical_normalize(std::string_view text, const JoinerRules& joiners,
                                const PunctuationSet& punctuation) {
  const std::u32string composed = nfc(to_u32(text));
  std::u32string out;
  out.reserve(composed.size());
  bool edited = false;
  bool punct = false;
  for (std::size_t i = 0; i < composed.size(); ++i) {
    const char32_t c = composed[i];
    if (JoinerRules::is_joiner(c)) {
      const char32_t prev = i > 0 ? composed[i - 1] : 0;
      const char32_t next = i + 1 < composed.size() ? composed[i + 1] : 0;
      if (!joiners.keep(c, prev, next)) {
        edited = true;
        continue;
      }
    } else if (punctuation.contains(c)) {
      edited = punct = true;
      out.push_back(U' ');
      continue;
    }
    out.push_back(c);
  }
  if (!edited) return to_utf8(composed);
  // Removing a joiner can bring a vowel sign next to its base.
  std::u32string recomposed = nfc(out);
  if (punct) recomposed = collapse_whitespace(recomposed);
  return to_utf8(recomposed);
}

std::string canonical_normalize(std::string_view text) {
  const Resources& r = Resources::shipped();
  return canonical_normalize(text, r.joiners, r.punctuation);
}

std::string replace_percent(std::string_view text, const TermLexicon& terms) {
  if (text.find('%') == std::string_view::npos) return std::string(text);
  const auto gloss = terms.lookup(U"%");
  if (!gloss) throw std::logic_error("term lexicon has no entry for '%'");
  std::string out;
  out.reserve(text.size() + 16);
  for (char c : text) {
    if (c == '%') {
      out.push_back(' ');
      out += *gloss;
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return collapse_whitespace(out);
}

std::string replace_percent(std::string_view text) {
  return replace_percent(text, Resources::shipped().terms);
}

Normalizer::Normalizer(Resources resources) : resources_(std::move(resources)) {}

Normalizer::Normalizer() : resources_(Resources::shipped()) {}

std::string Normalizer::apply_once(std::string_view raw) const {
  std::string t = strip_urls(raw);
  t = lowercase_latin(t);
  t = emoji_to_bangla(t, resources_.emoji);
  t = merge_comma_numbers(t);
  t = canonical_normalize(t, resources_.joiners, resources_.punctuation);
  t = replace_percent(t, resources_.terms);
  return collapse_whitespace(t);
}

NormalizedText Normalizer::normalize(std::string_view raw) const {
  std::string current = apply_once(raw);
  for (int pass = 1; pass < kMaxPasses; ++pass) {
    std::string next = apply_once(current);
    if (next == current) return NormalizedText(std::move(current));
    current = std::move(next);
  }
  throw std::logic_error("normalizer did not reach a fixed point");
}

}  // namespace bnhate::textnorm
