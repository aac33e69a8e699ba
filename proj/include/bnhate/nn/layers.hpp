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

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bnhate/nn/graph.hpp"
#include "bnhate/rng.hpp"

namespace bnhate::nn {

/// Glorot/Xavier uniform, U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
template <typename T>
Matrix<T> xavier_uniform(Index rows, Index cols, Index fan_in, Index fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix<T> m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(rng.uniform(-a, a));
  return m;
}

/// Square orthogonal matrix from the QR factorization of a Gaussian matrix,
/// with the sign convention that makes the factorization unique.
template <typename T>
Matrix<T> orthogonal(Index n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q.cast<T>();
}

template <typename T>
struct Linear {
  Parameter<T> weight;  // [out x in]
  Parameter<T> bias;    // [1 x out]

  Linear() = default;
  Linear(const std::string& name, Index in, Index out, Rng& rng)
      : weight(name + ".weight", xavier_uniform<T>(out, in, in, out, rng)),
        bias(name + ".bias", Matrix<T>::Zero(1, out)) {}

  Var<T> operator()(Graph<T>& g, const Var<T>& x) const {
    return g.linear(x, weight.var(), bias.var());
  }
  void collect(ParameterList<T>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }
};

template <typename T>
struct LayerNorm {
  Parameter<T> gamma;
  Parameter<T> beta;
  T eps = T(1e-5);

  LayerNorm() = default;
  LayerNorm(const std::string& name, Index width, T eps_ = T(1e-5))
      : gamma(name + ".weight", Matrix<T>::Ones(1, width)),
        beta(name + ".bias", Matrix<T>::Zero(1, width)),
        eps(eps_) {}

  Var<T> operator()(Graph<T>& g, const Var<T>& x) const {
    return g.layer_norm(x, gamma.var(), beta.var(), eps);
  }
  void collect(ParameterList<T>& out) {
    out.push_back(&gamma);
    out.push_back(&beta);
  }
};

/// One direction of one GRU layer. Gate order (reset, update, new) and the
/// two-bias formulation:
///   r = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
///   z = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
///   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
///   h' = (1 - z) * n + z * h
template <typename T>
struct GruDirection {
  Parameter<T> w_ih;  // [3H x I]
  Parameter<T> w_hh;  // [3H x H]
  Parameter<T> b_ih;  // [1 x 3H]
  Parameter<T> b_hh;  // [1 x 3H]
  Index hidden = 0;

  GruDirection() = default;
  GruDirection(const std::string& name, Index input, Index hidden_, Rng& rng) : hidden(hidden_) {
    Matrix<T> wih(3 * hidden, input);
    Matrix<T> whh(3 * hidden, hidden);
    for (Index gate = 0; gate < 3; ++gate) {
      wih.middleRows(gate * hidden, hidden) = xavier_uniform<T>(hidden, input, input, hidden, rng);
      whh.middleRows(gate * hidden, hidden) = orthogonal<T>(hidden, rng);
    }
    w_ih = Parameter<T>(name + ".w_ih", std::move(wih));
    w_hh = Parameter<T>(name + ".w_hh", std::move(whh));
    b_ih = Parameter<T>(name + ".b_ih", Matrix<T>::Zero(1, 3 * hidden));
    b_hh = Parameter<T>(name + ".b_hh", Matrix<T>::Zero(1, 3 * hidden));
  }

  /// x is [L x I]; returns hidden states [L x H] in input time order.
  Var<T> operator()(Graph<T>& g, const Var<T>& x, bool reverse) const {
    const Index L = x.rows();
    const Index H = hidden;
    const Var<T> xi = g.linear(x, w_ih.var(), b_ih.var());
    Var<T> h = g.constant(Matrix<T>::Zero(1, H));
    std::vector<Var<T>> states(static_cast<std::size_t>(L));
    for (Index s = 0; s < L; ++s) {
      const Index t = reverse ? L - 1 - s : s;
      const Var<T> xt = g.slice_rows(xi, t, 1);
      const Var<T> hh = g.linear(h, w_hh.var(), b_hh.var());
      const Var<T> r = g.sigmoid(g.add(g.slice_cols(xt, 0, H), g.slice_cols(hh, 0, H)));
      const Var<T> z = g.sigmoid(g.add(g.slice_cols(xt, H, H), g.slice_cols(hh, H, H)));
      const Var<T> n = g.tanh(g.add(g.slice_cols(xt, 2 * H, H), g.mul(r, g.slice_cols(hh, 2 * H, H))));
      h = g.add(g.mul(g.one_minus(z), n), g.mul(z, h));
      states[static_cast<std::size_t>(t)] = h;
    }
    return g.concat_rows(states);
  }

  void collect(ParameterList<T>& out) {
    out.push_back(&w_ih);
    out.push_back(&w_hh);
    out.push_back(&b_ih);
    out.push_back(&b_hh);
  }
};

/// Stacked bidirectional GRU; each layer emits [L x 2H] (forward | backward).
template <typename T>
struct BiGru {
  std::vector<std::array<GruDirection<T>, 2>> layers;

  BiGru() = default;
  BiGru(const std::string& name, Index input, Index hidden, Index num_layers, Rng& rng) {
    for (Index l = 0; l < num_layers; ++l) {
      const Index in = l == 0 ? input : 2 * hidden;
      const std::string prefix = name + ".l" + std::to_string(l);
      layers.push_back({GruDirection<T>(prefix + ".fwd", in, hidden, rng),
                        GruDirection<T>(prefix + ".bwd", in, hidden, rng)});
    }
  }

  Var<T> operator()(Graph<T>& g, Var<T> x) const {
    for (const auto& layer : layers) {
      x = g.concat_cols({layer[0](g, x, false), layer[1](g, x, true)});
    }
    return x;
  }

  void collect(ParameterList<T>& out) {
    for (auto& layer : layers) {
      layer[0].collect(out);
      layer[1].collect(out);
    }
  }
};

/// 1-D convolution along the token axis with "same" zero padding
/// (left = (k-1)/2, right = k-1-left). Weight is [F x k*D], laid out as
/// (offset, channel) to match Graph::unfold.
template <typename T>
struct Conv1d {
  Parameter<T> weight;
  Parameter<T> bias;
  Index kernel = 1;

  Conv1d() = default;
  Conv1d(const std::string& name, Index channels, Index filters, Index kernel_, Rng& rng)
      : weight(name + ".weight",
               xavier_uniform<T>(filters, kernel_ * channels, kernel_ * channels, kernel_ * filters, rng)),
        bias(name + ".bias", Matrix<T>::Zero(1, filters)),
        kernel(kernel_) {}

  Index left_pad() const { return (kernel - 1) / 2; }

  /// x is [L x D]; returns [L x F].
  Var<T> operator()(Graph<T>& g, const Var<T>& x) const {
    return g.linear(g.unfold(x, kernel, left_pad()), weight.var(), bias.var());
  }

  void collect(ParameterList<T>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }
};

/// Multi-head scaled dot-product self-attention with biased q/k/v/out
/// projections of equal width.
template <typename T>
struct SelfAttention {
  Linear<T> query, key, value, out;
  Index heads = 1;

  struct Result {
    Var<T> output;                  // [L x width]
    std::vector<Matrix<T>> weights;  // per head, [L x L]
  };

  SelfAttention() = default;
  SelfAttention(const std::string& name, Index width, Index heads_, Rng& rng)
      : query(name + ".q", width, width, rng),
        key(name + ".k", width, width, rng),
        value(name + ".v", width, width, rng),
        out(name + ".out", width, width, rng),
        heads(heads_) {
    if (heads <= 0 || width % heads != 0) throw std::invalid_argument("attention width not divisible by heads");
  }

  Result operator()(Graph<T>& g, const Var<T>& x, std::span<const std::uint8_t> key_mask = {}) const {
    const Index width = x.cols();
    const Index dh = width / heads;
    const T scale = T(1) / std::sqrt(static_cast<T>(dh));
    const Var<T> q = query(g, x);
    const Var<T> k = key(g, x);
    const Var<T> v = value(g, x);
    Result res;
    std::vector<Var<T>> ctx;
    for (Index h = 0; h < heads; ++h) {
      const Var<T> qh = heads == 1 ? q : g.slice_cols(q, h * dh, dh);
      const Var<T> kh = heads == 1 ? k : g.slice_cols(k, h * dh, dh);
      const Var<T> vh = heads == 1 ? v : g.slice_cols(v, h * dh, dh);
      const Var<T> a = g.masked_softmax(g.scale(g.matmul_nt(qh, kh), scale), key_mask);
      res.weights.push_back(a.value());
      ctx.push_back(g.matmul(a, vh));
    }
    res.output = out(g, heads == 1 ? ctx.front() : g.concat_cols(ctx));
    return res;
  }

  void collect(ParameterList<T>& params) {
    query.collect(params);
    key.collect(params);
    value.collect(params);
    out.collect(params);
  }
};

/// Inverted dropout: keeps each entry with probability 1 - p and rescales.
template <typename T>
Var<T> dropout(Graph<T>& g, const Var<T>& x, double p, Rng& rng) {
  if (p <= 0.0) return x;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  Matrix<T> mask(x.rows(), x.cols());
  for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(p) ? T(0) : keep_scale;
  return g.mul(x, g.constant(std::move(mask)));
}

}  // namespace bnhate::nn
