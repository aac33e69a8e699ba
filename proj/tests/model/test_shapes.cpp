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

#include <thread>

#include "bnhate/model/hybrid_head.hpp"
#include "bnhate/textnorm/normalizer.hpp"
#include "gradcheck.hpp"
#include "model_fixtures.hpp"

namespace bnhate::model {
namespace {

const textnorm::Normalizer& normalizer() {
  static const textnorm::Normalizer n;
  return n;
}

encoder::EmbeddingSequence embed(std::string_view text, nn::Index width = 768) {
  const encoder::HashTokenizer tok;
  return encoder::stub_embed(tok.tokenize(normalizer().normalize(text)), 42, width);
}

class FullSize : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { head_ = new HybridHead<float>(ModelConfig{}); }
  static void TearDownTestSuite() { delete head_; }
  static HybridHead<float>* head_;
};
HybridHead<float>* FullSize::head_ = nullptr;

TEST_F(FullSize, BranchAndFusedWidths) {
  const auto e = embed("আমি ভাল আছি");
  const auto gru = bigru_branch(*head_, e);
  const auto cnn = cnn_branch(*head_, e);
  EXPECT_EQ(gru.vec.size(), 256u);
  EXPECT_EQ(cnn.vec.size(), 384u);
  for (double v : gru.vec) EXPECT_TRUE(std::isfinite(v));
  for (double v : cnn.vec) EXPECT_TRUE(std::isfinite(v));

  nn::Graph<float> g(false);
  Rng rng(0);
  const auto fused = head_->fuse(g, g.constant(Eigen::Map<const nn::Matrix<double>>(gru.vec.data(), 1, 256).cast<float>()),
                                 g.constant(Eigen::Map<const nn::Matrix<double>>(cnn.vec.data(), 1, 384).cast<float>()),
                                 false, rng);
  EXPECT_EQ(fused.cols(), 128);
  EXPECT_EQ(head_->classify(g, fused).cols(), 6);
}

TEST_F(FullSize, FullLengthInput) {
  std::string text;
  for (int i = 0; i < 200; ++i) text += "শব্দ" + std::to_string(i) + " ";
  const auto e = embed(text);
  ASSERT_EQ(e.real_length(), 128);
  EXPECT_EQ(bigru_branch(*head_, e).vec.size(), 256u);
  EXPECT_EQ(cnn_branch(*head_, e).vec.size(), 384u);
}

TEST_F(FullSize, GruAttentionRowsAreDistributionsWithExactZerosAtPadding) {
  const auto e = embed("এক দুই তিন");  // 3 words + [CLS] + [SEP]
  ASSERT_EQ(e.real_length(), 5);
  const auto w = bigru_branch(*head_, e).attention.weights;
  ASSERT_EQ(w.rows(), 5);
  ASSERT_EQ(w.cols(), 128);
  for (nn::Index r = 0; r < w.rows(); ++r) {
    EXPECT_NEAR(w.row(r).sum(), 1.0, 1e-5);
    EXPECT_GE(w.row(r).minCoeff(), 0.0);
    for (nn::Index c = 5; c < 128; ++c) EXPECT_EQ(w(r, c), 0.0);
  }
}

TEST_F(FullSize, CnnAttentionIsThreeByThree) {
  const auto w = cnn_branch(*head_, embed("এক দুই")).attention.weights;
  ASSERT_EQ(w.rows(), 3);
  ASSERT_EQ(w.cols(), 3);
  for (nn::Index r = 0; r < 3; ++r) {
    EXPECT_NEAR(w.row(r).sum(), 1.0, 1e-5);
    EXPECT_GE(w.row(r).minCoeff(), 0.0);
  }
}

TEST_F(FullSize, WrongWidthIsShapeMismatch) {
  EXPECT_THROW(bigru_branch(*head_, embed("এক", 767)), ShapeMismatch);
  EXPECT_THROW(cnn_branch(*head_, embed("এক", 769)), ShapeMismatch);
  nn::Graph<float> g(false);
  Rng rng(0);
  EXPECT_THROW(head_->fuse(g, g.constant(nn::Matrix<float>::Zero(1, 255)), g.constant(nn::Matrix<float>::Zero(1, 384)),
                           false, rng),
               ShapeMismatch);
}

TEST(HybridHead, SingleRealTokenGivesThatPositionsVector) {
  // One real token: attention over one key is the identity, so the GRU
  // vector is the attention output at position 0.
  auto cfg = testing::tiny_config();
  HybridHead<double> head(cfg);
  encoder::EmbeddingSequence e;
  e.vectors = nn::Matrix<float>::Zero(6, 8);
  e.vectors.row(0) = ::bnhate::testing::fill(1, 8, 0.3).cast<float>();
  e.mask = {1, 0, 0, 0, 0, 0};
  const auto r = bigru_branch(head, e);
  EXPECT_EQ(r.attention.weights(0, 0), 1.0);

  nn::Graph<double> g(false);
  const auto x = g.constant(e.vectors.topRows(1).cast<double>());
  const auto b = head.bigru_branch(g, x);
  for (std::size_t j = 0; j < r.vec.size(); ++j) EXPECT_EQ(r.vec[j], b.vec.value()(0, static_cast<nn::Index>(j)));
}

TEST(HybridHead, KernelOnePoolingOfSingleToken) {
  // relu(W x + b) by hand for a 1-token input; max over one position is the value itself.
  Rng rng(1);
  nn::Conv1d<double> conv("c", 3, 2, 1, rng);
  conv.weight.value() << 1.0, -2.0, 0.5,  //
      -1.0, 0.0, 0.25;
  conv.bias.value() << 0.1, -0.2;
  nn::Graph<double> g(false);
  nn::Matrix<double> x(1, 3);
  x << 2.0, 1.0, 4.0;
  const auto pooled = g.max_rows(g.relu(conv(g, g.constant(x))));
  EXPECT_DOUBLE_EQ(pooled.value()(0, 0), 2.0 - 2.0 + 2.0 + 0.1);
  EXPECT_DOUBLE_EQ(pooled.value()(0, 1), 0.0);  // -2 + 1 - 0.2 < 0
}

TEST(HybridHead, FusedReluOutputIsLayerNormalized) {
  HybridHead<double> head(testing::tiny_config());
  nn::Graph<double> g(false);
  Rng rng(0);
  const auto f = head.fuse(g, g.constant(::bnhate::testing::fill(1, 8, 1)), g.constant(::bnhate::testing::fill(1, 12, 2)),
                           false, rng);
  // Fresh LayerNorm has unit gain and zero shift.
  EXPECT_NEAR(f.value().mean(), 0.0, 1e-12);
  for (nn::Index i = 0; i < f.cols(); ++i) EXPECT_TRUE(std::isfinite(f.value()(0, i)));
}

TEST(HybridHead, ZeroInputZeroBiasGivesZeroLogits) {
  HybridHead<double> head(testing::tiny_config());
  for (auto* p : head.parameters()) {
    if (p->name() == "classifier.bias") p->value().setZero();
  }
  nn::Graph<double> g(false);
  EXPECT_TRUE(head.classify(g, g.constant(nn::Matrix<double>::Zero(1, 4))).value().isZero(0.0));
}

TEST(Classifier, LogitWidthFollowsScheme) {
  for (auto [labels, want] : {std::pair{6, 6}, std::pair{5, 5}}) {
    auto cfg = testing::tiny_config();
    cfg.num_labels = labels;
    const auto c = testing::stub_classifier<float>(cfg);
    const auto out = c->forward({normalizer().normalize("এক"), normalizer().normalize("দুই তিন")});
    ASSERT_EQ(out.size(), 2u);
    for (const auto& z : out) EXPECT_EQ(static_cast<int>(z.size()), want);
  }
}

TEST(Classifier, BatchingInvariance) {
  const auto c = testing::stub_classifier<float>(ModelConfig{});
  std::vector<textnorm::NormalizedText> batch;
  for (int i = 0; i < 16; ++i) batch.push_back(normalizer().normalize("বাক্য " + std::to_string(i * 7) + " শেষ"));
  const auto together = c->forward(batch);
  for (int i : {0, 5, 15}) {
    const auto alone = c->forward({batch[static_cast<std::size_t>(i)]});
    for (std::size_t j = 0; j < alone[0].size(); ++j) {
      EXPECT_NEAR(alone[0][j], together[static_cast<std::size_t>(i)][j], 1e-5);
    }
  }
}

TEST(Classifier, PaddingInvariance) {
  const auto cfg = testing::tiny_config();
  const auto short_pad = testing::stub_classifier<float>(cfg, 7, 16);
  const auto long_pad = testing::stub_classifier<float>(cfg, 7, 128);
  const auto text = normalizer().normalize("এক দুই তিন চার");
  const auto a = short_pad->forward({text})[0];
  const auto b = long_pad->forward({text})[0];
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-5);

  // Garbage in the padded rows of an embedding sequence changes nothing.
  HybridHead<double> head(cfg);
  auto e = encoder::stub_embed(short_pad->tokenize(text), 3, 8);
  const auto before = bigru_branch(head, e).vec;
  const auto before_cnn = cnn_branch(head, e).vec;
  e.vectors.bottomRows(10).setConstant(99.0f);
  EXPECT_EQ(bigru_branch(head, e).vec, before);
  EXPECT_EQ(cnn_branch(head, e).vec, before_cnn);
}

TEST(Classifier, SeedDeterminismAndEvalPurity) {
  const auto cfg = testing::tiny_config();
  const auto a = testing::stub_classifier<float>(cfg);
  const auto b = testing::stub_classifier<float>(cfg);
  std::vector<nn::Matrix<float>> snapshot;
  for (auto* p : a->parameters()) snapshot.push_back(p->value());
  const std::vector<textnorm::NormalizedText> batch{normalizer().normalize("এক দুই"), normalizer().normalize("তিন")};
  const auto first = a->forward(batch);
  EXPECT_EQ(first, a->forward(batch));
  EXPECT_EQ(first, b->forward(batch));
  std::size_t i = 0;
  for (auto* p : a->parameters()) EXPECT_EQ(p->value(), snapshot[i++]);

  auto other = cfg;
  other.seed = 6;
  EXPECT_NE(first, testing::stub_classifier<float>(other)->forward(batch));
}

TEST(Classifier, ConcurrentInferenceMatchesSerial) {
  const auto c = testing::stub_classifier<float>(testing::tiny_config());
  const std::vector<textnorm::NormalizedText> batch{normalizer().normalize("এক দুই"), normalizer().normalize("তিন")};
  const auto want = c->forward(batch);
  std::vector<std::vector<std::vector<double>>> got(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < 4; ++t) threads.emplace_back([&, t] { got[t] = c->forward(batch); });
  for (auto& t : threads) t.join();
  for (const auto& g : got) EXPECT_EQ(g, want);
}

TEST(ModelConfig, ValidationAndJson) {
  ModelConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.cnn_kernels = {};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.gru_hidden = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = testing::tiny_config();
  EXPECT_EQ(nlohmann::json(c).get<ModelConfig>(), c);
}

}  // namespace
}  // namespace bnhate::model
