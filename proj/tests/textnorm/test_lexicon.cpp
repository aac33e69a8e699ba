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

#include <gtest/gtest.h>

#include <sstream>

#include "bnhate/textnorm/lexicon.hpp"
#include "bnhate/textnorm/normalizer.hpp"
#include "bnhate/textnorm/unicode.hpp"
#include "test_support.hpp"

namespace bnhate::textnorm {
namespace {

EmojiLexicon parse_emoji(const std::string& text) {
  std::istringstream in(text);
  return EmojiLexicon::parse(in, "lex.tsv");
}

TEST(EmojiLexicon, ShippedTableIsValidAndVersioned) {
  const auto lex = EmojiLexicon::load(testing::shipped_data("emoji_lexicon.tsv"));
  EXPECT_EQ(lex.version(), "1.0");
  EXPECT_GT(lex.size(), 50u);
  for (const auto& [key, gloss] : lex.entries()) {
    EXPECT_FALSE(key.empty());
    EXPECT_TRUE(is_emoji_base(key.front()));
    EXPECT_FALSE(gloss.empty());
    for (char32_t c : to_u32(gloss)) EXPECT_TRUE(c == U' ' || is_bangla_script(c));
  }
}

TEST(EmojiLexicon, ParsesEntriesAndComments) {
  const auto lex = parse_emoji("# version: 7\n\n😀\tহাসি\n🇧🇩\tবাংলাদেশ\n");
  EXPECT_EQ(lex.version(), "7");
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(*lex.lookup(U"\U0001F600"), "হাসি");
  EXPECT_EQ(lex.max_key_length(), 2u);
}

TEST(EmojiLexicon, MalformedLinesNameTheLine) {
  struct Bad {
    std::string text;
    std::size_t line;
  };
  for (const Bad& b : std::vector<Bad>{{"😀\tহাসি\nabc\tহাসি\n", 2},
                                       {"# c\n😀\n", 2},
                                       {"😀\thello\n", 1},
                                       {"😀\t\n", 1},
                                       {"😀\tহাসি\n😀\tখুশি\n", 2},
                                       {"😀\tহাসি  মুখ\n", 1},
                                       {"😀\tভাল\u09c7\u09be\n", 1}}) {
    try {
      parse_emoji(b.text);
      ADD_FAILURE() << "accepted: " << b.text;
    } catch (const LexiconError& e) {
      EXPECT_EQ(e.line(), b.line) << b.text;
      EXPECT_NE(std::string(e.what()).find("lex.tsv:" + std::to_string(b.line)), std::string::npos);
    }
  }
}

TEST(JoinerRules, FirstMatchWinsAndUnmatchedIsKept) {
  std::istringstream in("200D\t09B0\t09CD\tkeep\n200D\t*\t*\tdrop\n");
  const auto rules = JoinerRules::parse(in, "rules");
  EXPECT_TRUE(rules.keep(0x200D, 0x09B0, 0x09CD));
  EXPECT_FALSE(rules.keep(0x200D, 0x09B0, 0x0995));
  EXPECT_TRUE(rules.keep(0x200C, 0x0995, 0x0996));
}

TEST(JoinerRules, RejectsBadRows) {
  for (const char* text : {"200D\t*\t*\n", "0041\t*\t*\tdrop\n", "200D\t*\t*\tmaybe\n", "200D\tzz\t*\tdrop\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(JoinerRules::parse(in, "rules"), LexiconError) << text;
  }
}

TEST(PunctuationSet, ShippedContainsDaris) {
  const auto& p = Resources::shipped().punctuation;
  EXPECT_TRUE(p.contains(0x0964));
  EXPECT_TRUE(p.contains(0x0965));
  EXPECT_FALSE(p.contains(U','));
}

TEST(Resources, EmojiOverrideReplacesLexicon) {
  testing::TempDir dir;
  testing::write_file(dir / "lex.tsv", "😀\tমজা\n");
  const Normalizer n(Resources::load(testing::shipped_data(""), dir / "lex.tsv"));
  EXPECT_EQ(n.normalize("ক 😀").value(), "ক মজা");
  EXPECT_EQ(n.normalize("ক 😂").value(), "ক");
}

TEST(TermLexicon, ShippedHasPercent) {
  const auto& terms = Resources::shipped().terms;
  ASSERT_TRUE(terms.lookup(U"%"));
  EXPECT_EQ(*terms.lookup(U"%"), "শতাংশ");
}

}  // namespace
}  // namespace bnhate::textnorm
