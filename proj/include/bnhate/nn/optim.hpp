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

#include <cmath>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnhate/nn/graph.hpp"

namespace bnhate::nn {

/// Defaults follow torch.optim.AdamW.
struct AdamWConfig {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

inline nlohmann::ordered_json to_json(const AdamWConfig& c) {
  return {{"name", "AdamW"},       {"learning_rate", c.learning_rate}, {"beta1", c.beta1},
          {"beta2", c.beta2},      {"eps", c.eps},                     {"weight_decay", c.weight_decay}};
}

/// Decoupled weight decay Adam. Parameters that received no gradient in the
/// current step are left untouched.
template <typename T>
class AdamW {
 public:
  AdamW(ParameterList<T> params, AdamWConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    for (auto* p : params_) {
      m_.push_back(Matrix<T>::Zero(p->value().rows(), p->value().cols()));
      v_.push_back(Matrix<T>::Zero(p->value().rows(), p->value().cols()));
    }
  }

  void step() {
    ++steps_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
    const T lr = static_cast<T>(cfg_.learning_rate);
    const T b1 = static_cast<T>(cfg_.beta1);
    const T b2 = static_cast<T>(cfg_.beta2);
    const T step_size = static_cast<T>(cfg_.learning_rate / bc1);
    const T bc2_sqrt = static_cast<T>(std::sqrt(bc2));
    const T eps = static_cast<T>(cfg_.eps);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Parameter<T>& p = *params_[i];
      if (!p.trainable() || !p.has_grad()) continue;
      p.value() *= T(1) - lr * static_cast<T>(cfg_.weight_decay);
      m_[i] = b1 * m_[i] + (T(1) - b1) * p.grad();
      v_[i] = b2 * v_[i] + (T(1) - b2) * p.grad().cwiseAbs2();
      const auto denom = (v_[i].array().sqrt() / bc2_sqrt) + eps;
      p.value().array() -= step_size * m_[i].array() / denom;
    }
  }

  void zero_grad() {
    for (auto* p : params_) p->zero_grad();
  }

  std::int64_t steps() const { return steps_; }
  const AdamWConfig& config() const { return cfg_; }

 private:
  ParameterList<T> params_;
  AdamWConfig cfg_;
  std::vector<Matrix<T>> m_, v_;
  std::int64_t steps_ = 0;
};

template <typename T>
double global_grad_norm(const ParameterList<T>& params) {
  double sq = 0.0;
  for (const auto* p : params) {
    if (p->has_grad()) sq += p->grad().template cast<double>().squaredNorm();
  }
  return std::sqrt(sq);
}

/// Rescales all gradients so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping.
template <typename T>
double clip_grad_norm(ParameterList<T>& params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (norm > max_norm && norm > 0.0) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto* p : params) {
      if (p->has_grad()) p->grad() *= factor;
    }
  }
  return norm;
}

}  // namespace bnhate::nn
