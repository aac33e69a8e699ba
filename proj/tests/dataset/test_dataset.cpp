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

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bnhate/dataset/dataset.hpp"
#include "test_support.hpp"

namespace bnhate::dataset {
namespace {

const LabelScheme& s1a() { return LabelScheme::get(Subtask::k1A); }
const LabelScheme& s1b() { return LabelScheme::get(Subtask::k1B); }

std::vector<Example> parse(const std::string& text, const LabelScheme& scheme) {
  std::istringstream in(text);
  return parse_dataset(in, "data.tsv", scheme);
}

DatasetError::Kind kind_of(const std::string& text, const LabelScheme& scheme) {
  try {
    parse(text, scheme);
  } catch (const DatasetError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << text;
  return DatasetError::Kind::kIo;
}

/// Corpus with the given per-class counts, labels interleaved round-robin.
std::vector<Example> synthetic(const std::vector<std::size_t>& counts) {
  std::vector<Example> out;
  std::vector<std::size_t> left = counts;
  bool any = true;
  std::size_t n = 0;
  while (any) {
    any = false;
    for (std::size_t c = 0; c < left.size(); ++c) {
      if (left[c] == 0) continue;
      --left[c];
      any = true;
      out.push_back({"ex" + std::to_string(n++), "লেখা " + std::to_string(n), static_cast<ClassId>(c)});
    }
  }
  return out;
}

TEST(LabelScheme, Vocabularies) {
  EXPECT_EQ(s1a().names(),
            (std::vector<std::string>{"None", "Abusive", "Political Hate", "Profane", "Religious Hate", "Sexism"}));
  EXPECT_EQ(s1b().names(), (std::vector<std::string>{"None", "Individual", "Organization", "Community", "Society"}));
}

TEST(LabelScheme, BijectionRoundTrips) {
  for (const auto* s : {&s1a(), &s1b()}) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      const auto id = static_cast<ClassId>(i);
      EXPECT_EQ(s->id(s->name(id)), id);
    }
    EXPECT_FALSE(s->id("none"));
    EXPECT_FALSE(s->valid(static_cast<ClassId>(s->size())));
  }
}

TEST(LabelScheme, SubtaskNames) {
  EXPECT_EQ(parse_subtask("1A"), Subtask::k1A);
  EXPECT_EQ(parse_subtask("1B"), Subtask::k1B);
  EXPECT_FALSE(parse_subtask("1C"));
  EXPECT_EQ(to_string(Subtask::k1B), "1B");
}

TEST(LoadDataset, WellFormedRowsInOrder) {
  const auto d = parse("id\ttext\tlabel\nb\tদুই\tAbusive\na\tএক\tNone\nc\tতিন\tSexism\n", s1a());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], (Example{"b", "দুই", 1}));
  EXPECT_EQ(d[1].id, "a");
  EXPECT_EQ(d[2].label, 5);
}

TEST(LoadDataset, Errors) {
  EXPECT_EQ(kind_of("id\ttext\tlabel\nx\tলেখা\tSexism\n", s1b()), DatasetError::Kind::kUnknownLabel);
  EXPECT_EQ(kind_of("id\ttext\tlabel\nx1\tএক\tNone\nx1\tদুই\tNone\n", s1a()), DatasetError::Kind::kDuplicateId);
  EXPECT_EQ(kind_of("id\ttext\tlabel\nx1\tNone\n", s1a()), DatasetError::Kind::kMalformedRow);
  EXPECT_EQ(kind_of("id\ttext\tlabel\nx1\ta\tb\tNone\n", s1a()), DatasetError::Kind::kMalformedRow);
  EXPECT_EQ(kind_of("text\tlabel\n", s1a()), DatasetError::Kind::kMalformedRow);
  EXPECT_EQ(kind_of("", s1a()), DatasetError::Kind::kMalformedRow);
}

TEST(LoadDataset, ErrorsNameTheLine) {
  try {
    parse("id\ttext\tlabel\na\tএক\tNone\nb\tদুই\tMystery\n", s1a());
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("data.tsv:3"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, BomAndCrlfTolerated) {
  const auto d = parse("\xEF\xBB\xBFid\ttext\tlabel\r\na\tএক\tNone\r\n", s1a());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].label, 0);
}

TEST(LoadDataset, MissingFileIsIoError) {
  try {
    load_dataset("/nonexistent/x.tsv", s1a());
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::kIo);
  }
}

TEST(LoadDataset, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const auto data = synthetic({3, 2, 1, 1, 1, 1});
  save_dataset(dir / "d.tsv", data, s1a());
  EXPECT_EQ(load_dataset(dir / "d.tsv", s1a()), data);
}

TEST(LoadTexts, AcceptsTwoOrThreeColumns) {
  std::istringstream two("id\ttext\na\tএক\nb\t\n");
  const auto rows = parse_texts(two, "in");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].text, "");
  std::istringstream three("id\ttext\tlabel\na\tএক\tNone\n");
  EXPECT_EQ(parse_texts(three, "in")[0].text, "এক");
  std::istringstream bad("id\ttext\na\tb\tc\n");
  EXPECT_THROW(parse_texts(bad, "in"), DatasetError);
}

TEST(Distribution, PublishedCounts1A) {
  const std::vector<std::size_t> counts{19954, 8212, 4227, 2331, 676, 122};
  const auto dist = distribution(synthetic(counts), s1a());
  EXPECT_EQ(dist.counts, counts);
  EXPECT_EQ(dist.total, 35522u);
  // Printed percentages, one decimal place.
  const std::vector<double> printed{56.2, 23.1, 11.9, 6.6, 1.9, 0.3};
  for (std::size_t c = 0; c < counts.size(); ++c) EXPECT_NEAR(100.0 * dist.fractions[c], printed[c], 0.05);
}

TEST(Distribution, PublishedCounts1B) {
  const std::vector<std::size_t> counts{21190, 5646, 3846, 2635, 2205};
  const auto dist = distribution(synthetic(counts), s1b());
  EXPECT_EQ(dist.total, 35522u);
  const std::vector<double> printed{59.7, 15.9, 10.8, 7.4, 6.2};
  for (std::size_t c = 0; c < counts.size(); ++c) EXPECT_NEAR(100.0 * dist.fractions[c], printed[c], 0.05);
}

TEST(Distribution, SingleClass) {
  const auto dist = distribution(synthetic({4}), s1a());
  EXPECT_EQ(dist.fractions, (std::vector<double>{1.0, 0, 0, 0, 0, 0}));
}

TEST(Distribution, EmptyRejected) {
  EXPECT_THROW(distribution({}, s1a()), DatasetError);
}

TEST(Distribution, FractionsSumToOneAndJsonShape) {
  const auto dist = distribution(synthetic({7, 3, 5, 1, 1, 2}), s1a());
  double sum = 0.0;
  for (double f : dist.fractions) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  const auto j = distribution_json(dist, s1a());
  EXPECT_EQ(j["Abusive"]["count"], 3);
  EXPECT_EQ(j.begin().key(), "None");
}

TEST(StratifiedSplit, BalancedHundred) {
  const auto data = synthetic({50, 50});
  const auto split = stratified_split(data, s1a(), {0.1, 42});
  const auto dev = distribution(split.dev, s1a());
  EXPECT_EQ(dev.counts[0], 5u);
  EXPECT_EQ(dev.counts[1], 5u);
  EXPECT_EQ(split.train.size(), 90u);
}

TEST(StratifiedSplit, FullCorpusDevCountsAreRounded) {
  // round(0.1 x {19954, 8212, 4227, 2331, 676, 122})
  const auto split = stratified_split(synthetic({19954, 8212, 4227, 2331, 676, 122}), s1a(), {0.1, 42});
  EXPECT_EQ(distribution(split.dev, s1a()).counts, (std::vector<std::size_t>{1995, 821, 423, 233, 68, 12}));
}

TEST(StratifiedSplit, DeterministicDisjointCovering) {
  const auto data = synthetic({30, 17, 9, 4, 2, 3});
  const auto a = stratified_split(data, s1a(), {0.2, 7});
  const auto b = stratified_split(data, s1a(), {0.2, 7});
  EXPECT_EQ(a.dev, b.dev);
  EXPECT_EQ(a.train, b.train);
  std::set<std::string> ids;
  for (const auto& e : a.train) ids.insert(e.id);
  for (const auto& e : a.dev) EXPECT_TRUE(ids.insert(e.id).second);
  EXPECT_EQ(ids.size(), data.size());
  const auto total = distribution(data, s1a()).counts;
  const auto tr = distribution(a.train, s1a()).counts;
  const auto dv = distribution(a.dev, s1a()).counts;
  for (std::size_t c = 0; c < total.size(); ++c) EXPECT_EQ(tr[c] + dv[c], total[c]);
  const auto other = stratified_split(data, s1a(), {0.2, 8});
  EXPECT_NE(a.dev, other.dev);
}

TEST(StratifiedSplit, SmallClassesGetOneDevExample) {
  const auto split = stratified_split(synthetic({20, 2, 3}), s1a(), {0.1, 42});
  EXPECT_EQ(distribution(split.dev, s1a()).counts, (std::vector<std::size_t>{2, 1, 1, 0, 0, 0}));
}

TEST(StratifiedSplit, SingletonClassStaysInTrain) {
  const auto split = stratified_split(synthetic({20, 1}), s1a(), {0.1, 42});
  EXPECT_EQ(distribution(split.train, s1a()).counts[1], 1u);
}

TEST(StratifiedSplit, EmptyTrainRejected) {
  try {
    stratified_split(synthetic({20, 2}), s1a(), {0.9, 42});
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetError::Kind::kEmptyClass);
  }
}

TEST(ClassWeights, Examples) {
  ClassDistribution balanced{{5, 5}, {0.5, 0.5}, 10};
  EXPECT_EQ(class_weights(balanced, s1a()), (std::vector<double>{1.0, 1.0}));
  ClassDistribution skewed{{9, 1}, {0.9, 0.1}, 10};
  const auto w = class_weights(skewed, s1a());
  EXPECT_NEAR(w[0], 0.2, 1e-12);
  EXPECT_NEAR(w[1], 1.8, 1e-12);
  ClassDistribution single{{4}, {1.0}, 4};
  EXPECT_EQ(class_weights(single, s1a()), (std::vector<double>{1.0}));
}

TEST(ClassWeights, ZeroCountRejected) {
  ClassDistribution d{{4, 0}, {1.0, 0.0}, 4};
  EXPECT_THROW(class_weights(d, s1a()), DatasetError);
}

}  // namespace
}  // namespace bnhate::dataset
