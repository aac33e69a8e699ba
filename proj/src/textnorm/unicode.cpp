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

#include "bnhate/textnorm/unicode.hpp"

#include <stdexcept>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace bnhate::textnorm {
namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error(std::string("ICU NFC normalizer unavailable: ") +
                             u_errorName(status));
  }
  return *n;
}

icu::UnicodeString from_u32(std::u32string_view text) {
  return icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()),
      static_cast<int32_t>(text.size()));
}

std::u32string u32_of(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

const icu::Normalizer2& nfd_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error(std::string("ICU NFD normalizer unavailable: ") +
                             u_errorName(status));
  }
  return *n;
}

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  return u32_of(icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  from_u32(text).toUTF8String(out);
  return out;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_bangla_digit(char32_t c) { return c >= 0x09E6 && c <= 0x09EF; }

bool is_bangla_script(char32_t c) { return c >= 0x0980 && c <= 0x09FF; }

bool is_emoji_base(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (c >= 0x1F1E6 && c <= 0x1F1FF) return true;
  return u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_PRESENTATION);
}

bool is_emoji_continuation(char32_t c) {
  return c == 0xFE0F || c == 0xFE0E || c == 0x20E3 || (c >= 0x1F3FB && c <= 0x1F3FF) ||
         (c >= 0xE0020 && c <= 0xE007F);
}

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString dst = nfc_instance().normalize(src, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("NFC failed: ") + u_errorName(status));
  }
  std::string out;
  dst.toUTF8String(out);
  return out;
}

std::u32string nfc(std::u32string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString dst = nfc_instance().normalize(from_u32(text), status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("NFC failed: ") + u_errorName(status));
  }
  return u32_of(dst);
}

std::u32string nfd(std::u32string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString dst = nfd_instance().normalize(from_u32(text), status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("NFD failed: ") + u_errorName(status));
  }
  return u32_of(dst);
}

bool is_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const bool ok = nfc_instance().isNormalized(src, status);
  return U_SUCCESS(status) && ok;
}

std::u32string collapse_whitespace(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : text) {
    if (is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string collapse_whitespace(std::string_view utf8) {
  return to_utf8(collapse_whitespace(to_u32(utf8)));
}

}  // namespace bnhate::textnorm
