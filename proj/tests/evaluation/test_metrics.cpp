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

#include <numeric>

#include "bnhate/evaluation/metrics.hpp"
#include "bnhate/rng.hpp"
#include "oracles/brute_force_score.hpp"

namespace bnhate::evaluation {
namespace {

const dataset::LabelScheme& scheme_1a() { return dataset::LabelScheme::get(dataset::Subtask::k1A); }
const dataset::LabelScheme& scheme_1b() { return dataset::LabelScheme::get(dataset::Subtask::k1B); }

TEST(Argmax, HighestWinsTiesGoLow) {
  EXPECT_EQ(argmax(std::vector<double>{0.1, 0.9, 0.0}), 1);
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0);
  EXPECT_EQ(argmax(std::vector<double>{-1.0, 2.0, 2.0}), 1);
}

TEST(Score, PerfectPredictions) {
  std::vector<ClassId> gold{0, 1, 2, 3, 4, 5, 0, 0, 1, 2};
  const auto r = score(gold, gold, scheme_1a());
  EXPECT_EQ(r.micro_f1, 1.0);
  EXPECT_EQ(r.n, 10);
  for (std::size_t g = 0; g < 6; ++g) {
    for (std::size_t p = 0; p < 6; ++p) {
      if (g != p) {
        EXPECT_EQ(r.confusion[g][p], 0);
      }
    }
  }
}

TEST(Score, HandCountedExample) {
  const std::vector<ClassId> gold{0, 1, 2, 2}, pred{0, 1, 1, 2};
  const auto r = score(pred, gold, scheme_1a());
  EXPECT_DOUBLE_EQ(r.micro_f1, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[2].precision, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[2].recall, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[2].f1, 2.0 / 3.0);
  // Classes 3..5 never occur: reported as zeros.
  for (std::size_t c = 3; c < 6; ++c) {
    EXPECT_EQ(r.per_class[c].precision, 0.0);
    EXPECT_EQ(r.per_class[c].recall, 0.0);
    EXPECT_EQ(r.per_class[c].f1, 0.0);
    EXPECT_EQ(r.per_class[c].support, 0);
  }
  EXPECT_DOUBLE_EQ(r.macro_f1, (1.0 + 2.0 / 3.0 + 2.0 / 3.0) / 6.0);
}

TEST(Score, SingleExample) {
  const std::vector<ClassId> one{3}, other{4};
  EXPECT_EQ(score(one, one, scheme_1b()).micro_f1, 1.0);
  EXPECT_EQ(score(one, other, scheme_1b()).micro_f1, 0.0);
  EXPECT_EQ(oracles::brute_force_score(one, one, 5).micro_f1, 1.0);
  EXPECT_EQ(oracles::brute_force_score(one, other, 5).micro_f1, 0.0);
}

TEST(Score, Errors) {
  const std::vector<ClassId> a{0, 1}, b{0};
  try {
    score(a, b, scheme_1a());
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.kind(), EvaluationError::Kind::kLengthMismatch);
  }
  EXPECT_THROW(score(std::vector<ClassId>{}, std::vector<ClassId>{}, scheme_1a()), EvaluationError);
  try {
    score(std::vector<ClassId>{5}, std::vector<ClassId>{0}, scheme_1b());
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.kind(), EvaluationError::Kind::kInvalidId);
  }
  EXPECT_THROW(score(std::vector<ClassId>{-1}, std::vector<ClassId>{0}, scheme_1a()), EvaluationError);
}

struct Instance {
  std::vector<ClassId> pred, gold;
};

Instance random_instance(Rng& rng, std::size_t classes) {
  const std::size_t n = 1 + rng.uniform_index(60);
  // Skewed gold so some classes are empty, and a varying hit rate.
  const double hit = rng.uniform01();
  Instance x;
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = static_cast<ClassId>(rng.uniform01() < 0.5 ? 0 : rng.uniform_index(classes));
    x.gold.push_back(g);
    x.pred.push_back(rng.bernoulli(hit) ? g : static_cast<ClassId>(rng.uniform_index(classes)));
  }
  return x;
}

TEST(Score, MatchesBruteForceOracle) {
  Rng rng(77);
  int checked = 0;
  for (const auto* scheme : {&scheme_1b(), &scheme_1a()}) {
    for (int trial = 0; trial < 600; ++trial) {
      const auto x = random_instance(rng, scheme->size());
      const auto r = score(x.pred, x.gold, *scheme);
      const auto o = oracles::brute_force_score(x.pred, x.gold, scheme->size());
      ASSERT_LE(oracles::report_distance(r, o), 1e-12) << "trial " << trial;
      std::int64_t trace = 0;
      for (std::size_t c = 0; c < scheme->size(); ++c) trace += r.confusion[c][c];
      ASSERT_EQ(r.micro_f1, static_cast<double>(trace) / static_cast<double>(r.n));
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(Score, StructuralInvariants) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_instance(rng, 6);
    const auto r = score(x.pred, x.gold, scheme_1a());
    std::int64_t total = 0;
    for (std::size_t g = 0; g < 6; ++g) {
      const auto row = std::accumulate(r.confusion[g].begin(), r.confusion[g].end(), std::int64_t{0});
      EXPECT_EQ(row, r.per_class[g].support);
      total += row;
      for (double v : {r.per_class[g].precision, r.per_class[g].recall, r.per_class[g].f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
    EXPECT_EQ(total, r.n);
    EXPECT_GE(r.macro_f1, 0.0);
    EXPECT_LE(r.macro_f1, 1.0);
  }
}

TEST(Score, InvariantUnderJointPermutation) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_instance(rng, 6);
    const auto before = score(x.pred, x.gold, scheme_1a());
    std::vector<std::size_t> order(x.pred.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    Instance y;
    for (auto i : order) {
      y.pred.push_back(x.pred[i]);
      y.gold.push_back(x.gold[i]);
    }
    const auto after = score(y.pred, y.gold, scheme_1a());
    EXPECT_EQ(oracles::report_distance(before, after), 0.0);
  }
}

TEST(Score, RelabelingPermutesReport) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_instance(rng, 6);
    std::vector<ClassId> perm{0, 1, 2, 3, 4, 5};
    rng.shuffle(std::span<ClassId>(perm));
    Instance y;
    for (std::size_t i = 0; i < x.pred.size(); ++i) {
      y.pred.push_back(perm[static_cast<std::size_t>(x.pred[i])]);
      y.gold.push_back(perm[static_cast<std::size_t>(x.gold[i])]);
    }
    const auto a = score(x.pred, x.gold, scheme_1a());
    const auto b = score(y.pred, y.gold, scheme_1a());
    EXPECT_NEAR(a.micro_f1, b.micro_f1, 1e-15);
    EXPECT_NEAR(a.macro_f1, b.macro_f1, 1e-12);
    for (std::size_t g = 0; g < 6; ++g) {
      const auto pg = static_cast<std::size_t>(perm[g]);
      EXPECT_EQ(a.per_class[g].support, b.per_class[pg].support);
      EXPECT_EQ(a.per_class[g].f1, b.per_class[pg].f1);
      for (std::size_t p = 0; p < 6; ++p) {
        EXPECT_EQ(a.confusion[g][p], b.confusion[pg][static_cast<std::size_t>(perm[p])]);
      }
    }
  }
}

TEST(Report, JsonCarriesEveryField) {
  const std::vector<ClassId> gold{0, 1, 2, 2}, pred{0, 1, 1, 2};
  const auto r = score(pred, gold, scheme_1a());
  const auto j = report_json(r, scheme_1a());
  EXPECT_EQ(j["n"], 4);
  EXPECT_EQ(j["micro_f1"], 0.75);
  EXPECT_EQ(j["per_class"]["Abusive"]["support"], 1);
  EXPECT_EQ(j["labels"].size(), 6u);
  EXPECT_EQ(j["confusion"][2][1], 1);
  const auto text = format_report(r, scheme_1a());
  EXPECT_NE(text.find("micro-F1"), std::string::npos);
  EXPECT_NE(text.find("Political Hate"), std::string::npos);
}

}  // namespace
}  // namespace bnhate::evaluation
