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

namespace bnhate::textnorm {

// Invalid UTF-8 sequences decode to U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

bool is_whitespace(char32_t c);
bool is_ascii_digit(char32_t c);
bool is_bangla_digit(char32_t c);
bool is_bangla_script(char32_t c);  // U+0980..U+09FF

// Extended_Pictographic, Emoji_Presentation, or a regional indicator.
bool is_emoji_base(char32_t c);
// Code points that may continue an emoji sequence: VS16, skin-tone
// modifiers, keycap, tags, and the text presentation selector.
bool is_emoji_continuation(char32_t c);

std::string nfc(std::string_view utf8);
std::u32string nfc(std::u32string_view text);
bool is_nfc(std::string_view utf8);
std::u32string nfd(std::u32string_view text);

// Collapses every run of Unicode whitespace into one U+0020 and trims both ends.
std::u32string collapse_whitespace(std::u32string_view text);
std::string collapse_whitespace(std::string_view utf8);

}  // namespace bnhate::textnorm
