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

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bnhate/nn/graph.hpp"

namespace bnhate::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // parameter name and flat index
  std::size_t checked = 0;
};

/// Compares reverse-mode gradients of a scalar loss with central finite
/// differences for every entry of every parameter.
inline GradCheckResult grad_check(const nn::ParameterList<double>& params,
                                  const std::function<nn::Var<double>(nn::Graph<double>&)>& loss,
                                  double h = 1e-6) {
  for (auto* p : params) p->zero_grad();
  {
    nn::Graph<double> g(true);
    g.backward(loss(g));
  }
  auto eval = [&] {
    nn::Graph<double> g(false);
    return loss(g).value()(0, 0);
  };
  GradCheckResult r;
  for (auto* p : params) {
    const nn::Matrix<double> analytic =
        p->has_grad() ? p->grad() : nn::Matrix<double>::Zero(p->value().rows(), p->value().cols());
    for (nn::Index i = 0; i < p->value().size(); ++i) {
      double& w = p->value().data()[i];
      const double saved = w;
      w = saved + h;
      const double up = eval();
      w = saved - h;
      const double down = eval();
      w = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic.data()[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      const double rel = std::abs(a - numeric) / denom;
      ++r.checked;
      if (rel > r.max_rel_error) {
        r.max_rel_error = rel;
        r.worst = p->name() + "[" + std::to_string(i) + "] analytic " + std::to_string(a) + " numeric " +
                  std::to_string(numeric);
      }
    }
  }
  return r;
}

/// Same deterministic fill the PyTorch reference script uses.
inline nn::Matrix<double> fill(nn::Index rows, nn::Index cols, double offset) {
  nn::Matrix<double> m(rows, cols);
  for (nn::Index i = 0; i < m.size(); ++i) m.data()[i] = 0.5 * std::sin(0.37 * static_cast<double>(i) + offset);
  return m;
}

}  // namespace bnhate::testing
