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

#include <fstream>

#include <nlohmann/json.hpp>

#include "bnhate/nn/optim.hpp"
#include "bnhate/rng.hpp"
#include "gradcheck.hpp"
#include "test_support.hpp"

namespace bnhate::nn {
namespace {

using testing::fill;

TEST(AdamW, MatchesTorchTrajectory) {
  std::ifstream in(testing::fixture("torch_reference.json"));
  const auto ref = nlohmann::json::parse(in)["adamw"];
  AdamWConfig cfg;
  cfg.learning_rate = 0.1;
  EXPECT_EQ(ref["defaults"]["betas"][0].get<double>(), cfg.beta1);
  EXPECT_EQ(ref["defaults"]["betas"][1].get<double>(), cfg.beta2);
  EXPECT_EQ(ref["defaults"]["eps"].get<double>(), cfg.eps);
  EXPECT_EQ(ref["defaults"]["weight_decay"].get<double>(), cfg.weight_decay);

  Parameter<double> p("p", fill(1, 3, 0) * 4.0);
  AdamW<double> opt({&p}, cfg);
  for (int s = 0; s < 3; ++s) {
    opt.zero_grad();
    p.grad() = fill(1, 3, 10 + s);
    opt.step();
    const auto want = ref["steps"][static_cast<std::size_t>(s)].get<std::vector<double>>();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.value()(0, i), want[static_cast<std::size_t>(i)], 1e-12);
  }
  EXPECT_EQ(opt.steps(), 3);
}

TEST(AdamW, SkipsParametersWithoutGradient) {
  Parameter<double> p("p", fill(2, 2, 0));
  const Matrix<double> before = p.value();
  AdamW<double> opt({&p}, {});
  opt.step();
  EXPECT_EQ(p.value(), before);
}

TEST(AdamW, DefaultsAreLoggedVerbatim) {
  const auto j = to_json(AdamWConfig{});
  EXPECT_EQ(j["name"], "AdamW");
  EXPECT_EQ(j["learning_rate"], 1e-5);
  EXPECT_EQ(j["beta1"], 0.9);
  EXPECT_EQ(j["beta2"], 0.999);
  EXPECT_EQ(j["eps"], 1e-8);
  EXPECT_EQ(j["weight_decay"], 0.01);
}

TEST(ClipGradNorm, ScalesToThreshold) {
  Parameter<double> a("a", Matrix<double>::Zero(1, 2)), b("b", Matrix<double>::Zero(1, 1));
  a.grad() = Matrix<double>(1, 2);
  a.grad() << 3.0, 0.0;
  b.grad() = Matrix<double>::Constant(1, 1, 4.0);
  ParameterList<double> params{&a, &b};
  EXPECT_DOUBLE_EQ(clip_grad_norm(params, 1.0), 5.0);
  EXPECT_NEAR(global_grad_norm(params), 1.0, 1e-6);
}

TEST(ClipGradNorm, IdentityBelowThresholdAndNeverIncreases) {
  bnhate::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Parameter<double> a("a", Matrix<double>::Zero(3, 3));
    a.grad() = Matrix<double>(3, 3);
    const double scale = rng.uniform(0.01, 10.0);
    for (Index i = 0; i < 9; ++i) a.grad().data()[i] = rng.normal() * scale;
    ParameterList<double> params{&a};
    const Matrix<double> before = a.grad();
    const double norm = clip_grad_norm(params, 2.0);
    const double after = global_grad_norm(params);
    EXPECT_LE(after, norm + 1e-12);
    if (norm <= 2.0) {
      EXPECT_EQ(a.grad(), before);
    } else {
      EXPECT_NEAR(after, 2.0, 1e-9);
    }
  }
}

TEST(ClipGradNorm, ParametersWithoutGradIgnored) {
  Parameter<double> a("a", Matrix<double>::Zero(1, 1)), b("b", Matrix<double>::Zero(1, 1));
  a.grad() = Matrix<double>::Constant(1, 1, 10.0);
  ParameterList<double> params{&a, &b};
  clip_grad_norm(params, 1.0);
  EXPECT_NEAR(a.grad()(0, 0), 1.0, 1e-12);
  EXPECT_FALSE(b.has_grad());
}

}  // namespace
}  // namespace bnhate::nn
