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

#include "bnhate/encoder/tokenizer.hpp"

#include <fstream>
#include <stdexcept>

#include <spdlog/spdlog.h>
#include <unicode/uchar.h>

#include "bnhate/encoder/backend_error.hpp"
#include "bnhate/textnorm/unicode.hpp"

namespace bnhate::encoder {
namespace {

bool is_control(char32_t c) {
  if (c == U'\t' || c == U'\n' || c == U'\r') return false;
  const auto cat = u_charType(static_cast<UChar32>(c));
  return cat == U_CONTROL_CHAR || cat == U_FORMAT_CHAR;
}

bool is_punctuation(char32_t c) {
  if ((c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) || (c >= 123 && c <= 126)) {
    return true;
  }
  return u_ispunct(static_cast<UChar32>(c));
}

bool is_cjk(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) || (c >= 0x20000 && c <= 0x2A6DF) ||
         (c >= 0x2A700 && c <= 0x2B73F) || (c >= 0x2B740 && c <= 0x2B81F) ||
         (c >= 0x2B820 && c <= 0x2CEAF) || (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x2F800 && c <= 0x2FA1F);
}

std::u32string lower_and_strip_accents(const std::u32string& word) {
  std::u32string lowered;
  for (char32_t c : word) lowered.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
  std::u32string out;
  for (char32_t c : textnorm::nfd(lowered)) {
    if (u_charType(static_cast<UChar32>(c)) != U_NON_SPACING_MARK) out.push_back(c);
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

int TokenizedInput::real_length() const {
  int n = 0;
  while (n < static_cast<int>(mask.size()) && mask[static_cast<std::size_t>(n)]) ++n;
  return n;
}

std::vector<std::string> basic_tokenize(std::string_view text, bool lowercase) {
  std::vector<std::u32string> words;
  std::u32string current;
  const auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (char32_t c : textnorm::to_u32(text)) {
    if (c == 0 || c == 0xFFFD || is_control(c)) continue;
    if (textnorm::is_whitespace(c)) {
      flush();
    } else if (is_punctuation(c) || is_cjk(c)) {
      flush();
      words.push_back(std::u32string(1, c));
    } else {
      current.push_back(c);
    }
  }
  flush();

  std::vector<std::string> out;
  out.reserve(words.size());
  for (auto& w : words) {
    if (lowercase) {
      w = lower_and_strip_accents(w);
      if (w.empty()) continue;
    }
    out.push_back(textnorm::to_utf8(w));
  }
  return out;
}

TokenizedInput Tokenizer::tokenize(const textnorm::NormalizedText& text) const {
  const std::vector<TokenId> p = pieces(text.value());
  if (p.empty()) {
    spdlog::warn("text produced no tokens; encoding boundary tokens only");
  }
  return assemble(p);
}

TokenizedInput Tokenizer::assemble(const std::vector<TokenId>& pieces) const {
  const auto L = static_cast<std::size_t>(max_length_);
  TokenizedInput out;
  out.token_ids.assign(L, specials_.pad);
  out.mask.assign(L, 0);
  const std::size_t kept = std::min(pieces.size(), L - 2);
  out.token_ids[0] = specials_.cls;
  for (std::size_t i = 0; i < kept; ++i) out.token_ids[i + 1] = pieces[i];
  out.token_ids[kept + 1] = specials_.sep;
  std::fill(out.mask.begin(), out.mask.begin() + static_cast<std::ptrdiff_t>(kept + 2), 1);
  return out;
}

HashTokenizer::HashTokenizer(int max_length, TokenId vocab_size)
    : Tokenizer(max_length, SpecialTokens{}), vocab_size_(vocab_size) {
  if (max_length < 2) throw std::invalid_argument("max_length must be at least 2");
  if (vocab_size <= kFirstRegularId) throw std::invalid_argument("stub vocabulary too small");
}

std::vector<TokenId> HashTokenizer::pieces(std::string_view text) const {
  std::vector<TokenId> ids;
  const auto buckets = static_cast<std::uint64_t>(vocab_size_ - kFirstRegularId);
  for (const std::string& word : basic_tokenize(text)) {
    ids.push_back(kFirstRegularId + static_cast<TokenId>(fnv1a(word) % buckets));
  }
  return ids;
}

WordPieceTokenizer::WordPieceTokenizer(std::unordered_map<std::string, TokenId> vocab,
                                       SpecialTokens specials, bool lowercase, int max_length)
    : Tokenizer(max_length, specials), vocab_(std::move(vocab)), lowercase_(lowercase) {}

WordPieceTokenizer WordPieceTokenizer::from_vocab_file(const std::filesystem::path& path, bool lowercase,
                                                       int max_length) {
  std::ifstream in(path);
  if (!in) throw BackendUnavailable(path.string());
  std::unordered_map<std::string, TokenId> vocab;
  std::string line;
  TokenId id = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.emplace(line, id++);
  }
  const auto need = [&](const char* tok) {
    const auto it = vocab.find(tok);
    if (it == vocab.end()) {
      throw std::runtime_error(path.string() + ": vocabulary lacks " + std::string(tok));
    }
    return it->second;
  };
  SpecialTokens sp;
  sp.pad = need("[PAD]");
  sp.unk = need("[UNK]");
  sp.cls = need("[CLS]");
  sp.sep = need("[SEP]");
  return WordPieceTokenizer(std::move(vocab), sp, lowercase, max_length);
}

std::vector<TokenId> WordPieceTokenizer::pieces(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const std::string& word : basic_tokenize(text, lowercase_)) {
    const std::u32string chars = textnorm::to_u32(word);
    if (chars.size() > kMaxCharsPerWord) {
      ids.push_back(specials().unk);
      continue;
    }
    std::vector<TokenId> sub;
    bool bad = false;
    std::size_t start = 0;
    while (start < chars.size()) {
      std::size_t end = chars.size();
      TokenId found = -1;
      while (start < end) {
        std::string piece = textnorm::to_utf8(std::u32string_view(chars).substr(start, end - start));
        if (start > 0) piece = "##" + piece;
        if (const auto it = vocab_.find(piece); it != vocab_.end()) {
          found = it->second;
          break;
        }
        --end;
      }
      if (found < 0) {
        bad = true;
        break;
      }
      sub.push_back(found);
      start = end;
    }
    if (bad) {
      ids.push_back(specials().unk);
    } else {
      ids.insert(ids.end(), sub.begin(), sub.end());
    }
  }
  return ids;
}

}  // namespace bnhate::encoder
