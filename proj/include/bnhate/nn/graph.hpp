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

// Minimal reverse-mode automatic differentiation over row-major Eigen
// matrices. A Graph records the operations of one forward pass; backward()
// walks them in reverse and accumulates gradients into every node that
// requires them, including persistent Parameters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bnhate::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;

template <typename T>
struct Node {
  Matrix<T> value;
  Matrix<T> grad;  // empty until something flows in
  bool requires_grad = false;
  std::function<void(Node&)> backward;

  template <typename Expr>
  void accumulate(const Expr& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

template <typename T>
using NodePtr = std::shared_ptr<Node<T>>;

template <typename T>
class Var {
 public:
  Var() = default;
  explicit Var(NodePtr<T> node) : node_(std::move(node)) {}

  const Matrix<T>& value() const { return node_->value; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  bool requires_grad() const { return node_->requires_grad; }
  const NodePtr<T>& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  NodePtr<T> node_;
};

/// Named trainable tensor that outlives individual graphs.
template <typename T>
class Parameter {
 public:
  Parameter() = default;
  Parameter(std::string name, Matrix<T> init) : name_(std::move(name)), node_(std::make_shared<Node<T>>()) {
    node_->value = std::move(init);
    node_->requires_grad = true;
  }

  const std::string& name() const { return name_; }
  Matrix<T>& value() { return node_->value; }
  const Matrix<T>& value() const { return node_->value; }
  Matrix<T>& grad() { return node_->grad; }
  const Matrix<T>& grad() const { return node_->grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  void zero_grad() { node_->grad.resize(0, 0); }
  void set_trainable(bool on) { node_->requires_grad = on; }
  bool trainable() const { return node_->requires_grad; }
  Index size() const { return node_->value.size(); }
  Var<T> var() const { return Var<T>(node_); }

 private:
  std::string name_;
  NodePtr<T> node_;
};

template <typename T>
using ParameterList = std::vector<Parameter<T>*>;

template <typename T>
class Graph {
 public:
  explicit Graph(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  bool grad_enabled() const { return grad_enabled_; }

  Var<T> constant(Matrix<T> value) {
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    return Var<T>(std::move(n));
  }

  Var<T> param(const Parameter<T>& p) const { return p.var(); }

  /// Seeds d(out)/d(out) = seed for a 1x1 output and propagates.
  void backward(const Var<T>& out, T seed = T(1)) {
    if (out.rows() != 1 || out.cols() != 1) throw std::invalid_argument("backward needs a scalar");
    if (!out.requires_grad()) return;
    out.node()->accumulate(Matrix<T>::Constant(1, 1, seed));
    for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) {
      Node<T>& n = **it;
      if (n.grad.size() != 0 && n.backward) n.backward(n);
    }
  }

  // ---- linear algebra ----

  Var<T> matmul(const Var<T>& a, const Var<T>& b) {
    check(a.cols() == b.rows(), "matmul");
    return record(a.value() * b.value(), {a, b}, [pa = a.node(), pb = b.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad * pb->value.transpose());
      if (pb->requires_grad) pb->accumulate(pa->value.transpose() * self.grad);
    });
  }

  /// a * b^T
  Var<T> matmul_nt(const Var<T>& a, const Var<T>& b) {
    check(a.cols() == b.cols(), "matmul_nt");
    return record(a.value() * b.value().transpose(), {a, b}, [pa = a.node(), pb = b.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad * pb->value);
      if (pb->requires_grad) pb->accumulate(self.grad.transpose() * pa->value);
    });
  }

  /// x W^T + b, with W stored [out x in] and b [1 x out].
  Var<T> linear(const Var<T>& x, const Var<T>& w, const Var<T>& b) {
    check(x.cols() == w.cols() && b.rows() == 1 && b.cols() == w.rows(), "linear");
    Matrix<T> y = x.value() * w.value().transpose();
    y.rowwise() += b.value().row(0);
    return record(std::move(y), {x, w, b},
                  [px = x.node(), pw = w.node(), pb = b.node()](Node<T>& self) {
                    if (px->requires_grad) px->accumulate(self.grad * pw->value);
                    if (pw->requires_grad) pw->accumulate(self.grad.transpose() * px->value);
                    if (pb->requires_grad) pb->accumulate(self.grad.colwise().sum());
                  });
  }

  Var<T> transpose(const Var<T>& a) {
    return record(a.value().transpose(), {a}, [pa = a.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad.transpose());
    });
  }

  // ---- elementwise ----

  Var<T> add(const Var<T>& a, const Var<T>& b) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "add");
    return record(a.value() + b.value(), {a, b}, [pa = a.node(), pb = b.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad);
      if (pb->requires_grad) pb->accumulate(self.grad);
    });
  }

  Var<T> sub(const Var<T>& a, const Var<T>& b) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "sub");
    return record(a.value() - b.value(), {a, b}, [pa = a.node(), pb = b.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad);
      if (pb->requires_grad) pb->accumulate(-self.grad);
    });
  }

  Var<T> mul(const Var<T>& a, const Var<T>& b) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "mul");
    return record(a.value().cwiseProduct(b.value()), {a, b}, [pa = a.node(), pb = b.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad.cwiseProduct(pb->value));
      if (pb->requires_grad) pb->accumulate(self.grad.cwiseProduct(pa->value));
    });
  }

  /// a + row, broadcasting a [1 x n] row over every row of a.
  Var<T> add_row(const Var<T>& a, const Var<T>& row) {
    check(row.rows() == 1 && row.cols() == a.cols(), "add_row");
    Matrix<T> y = a.value();
    y.rowwise() += row.value().row(0);
    return record(std::move(y), {a, row}, [pa = a.node(), pr = row.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad);
      if (pr->requires_grad) pr->accumulate(self.grad.colwise().sum());
    });
  }

  Var<T> scale(const Var<T>& a, T s) {
    return record(a.value() * s, {a}, [pa = a.node(), s](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(self.grad * s);
    });
  }

  /// 1 - a
  Var<T> one_minus(const Var<T>& a) {
    return record((T(1) - a.value().array()).matrix(), {a}, [pa = a.node()](Node<T>& self) {
      if (pa->requires_grad) pa->accumulate(-self.grad);
    });
  }

  Var<T> sigmoid(const Var<T>& a) {
    Matrix<T> y = a.value().unaryExpr([](T v) { return T(1) / (T(1) + std::exp(-v)); });
    return record(std::move(y), {a}, [pa = a.node()](Node<T>& self) {
      if (!pa->requires_grad) return;
      const auto& y = self.value.array();
      pa->accumulate((self.grad.array() * y * (T(1) - y)).matrix());
    });
  }

  Var<T> tanh(const Var<T>& a) {
    Matrix<T> y = a.value().unaryExpr([](T v) { return std::tanh(v); });
    return record(std::move(y), {a}, [pa = a.node()](Node<T>& self) {
      if (!pa->requires_grad) return;
      const auto& y = self.value.array();
      pa->accumulate((self.grad.array() * (T(1) - y * y)).matrix());
    });
  }

  Var<T> relu(const Var<T>& a) {
    Matrix<T> y = a.value().cwiseMax(T(0));
    return record(std::move(y), {a}, [pa = a.node()](Node<T>& self) {
      if (!pa->requires_grad) return;
      pa->accumulate((self.grad.array() * (pa->value.array() > T(0)).template cast<T>()).matrix());
    });
  }

  /// Exact (erf) GELU.
  Var<T> gelu(const Var<T>& a) {
    const T inv_sqrt2 = T(1) / std::sqrt(T(2));
    Matrix<T> y = a.value().unaryExpr(
        [inv_sqrt2](T v) { return T(0.5) * v * (T(1) + std::erf(v * inv_sqrt2)); });
    return record(std::move(y), {a}, [pa = a.node(), inv_sqrt2](Node<T>& self) {
      if (!pa->requires_grad) return;
      const T inv_sqrt_2pi = T(1) / std::sqrt(T(2) * std::numbers::pi_v<T>);
      Matrix<T> d = pa->value.unaryExpr([&](T v) {
        return T(0.5) * (T(1) + std::erf(v * inv_sqrt2)) + v * inv_sqrt_2pi * std::exp(T(-0.5) * v * v);
      });
      pa->accumulate(self.grad.cwiseProduct(d));
    });
  }

  // ---- shape ----

  Var<T> slice_rows(const Var<T>& a, Index start, Index count) {
    check(start >= 0 && count >= 0 && start + count <= a.rows(), "slice_rows");
    return record(a.value().middleRows(start, count), {a}, [pa = a.node(), start, count](Node<T>& self) {
      if (!pa->requires_grad) return;
      ensure_grad(*pa);
      pa->grad.middleRows(start, count) += self.grad;
    });
  }

  Var<T> slice_cols(const Var<T>& a, Index start, Index count) {
    check(start >= 0 && count >= 0 && start + count <= a.cols(), "slice_cols");
    return record(a.value().middleCols(start, count), {a}, [pa = a.node(), start, count](Node<T>& self) {
      if (!pa->requires_grad) return;
      ensure_grad(*pa);
      pa->grad.middleCols(start, count) += self.grad;
    });
  }

  Var<T> concat_cols(const std::vector<Var<T>>& parts) {
    check(!parts.empty(), "concat_cols");
    Index total = 0;
    for (const auto& p : parts) {
      check(p.rows() == parts.front().rows(), "concat_cols rows");
      total += p.cols();
    }
    Matrix<T> y(parts.front().rows(), total);
    Index off = 0;
    std::vector<NodePtr<T>> nodes;
    for (const auto& p : parts) {
      y.middleCols(off, p.cols()) = p.value();
      off += p.cols();
      nodes.push_back(p.node());
    }
    return record_many(std::move(y), nodes, [nodes](Node<T>& self) {
      Index o = 0;
      for (const auto& n : nodes) {
        if (n->requires_grad) n->accumulate(self.grad.middleCols(o, n->value.cols()));
        o += n->value.cols();
      }
    });
  }

  Var<T> concat_rows(const std::vector<Var<T>>& parts) {
    check(!parts.empty(), "concat_rows");
    Index total = 0;
    for (const auto& p : parts) {
      check(p.cols() == parts.front().cols(), "concat_rows cols");
      total += p.rows();
    }
    Matrix<T> y(total, parts.front().cols());
    Index off = 0;
    std::vector<NodePtr<T>> nodes;
    for (const auto& p : parts) {
      y.middleRows(off, p.rows()) = p.value();
      off += p.rows();
      nodes.push_back(p.node());
    }
    return record_many(std::move(y), nodes, [nodes](Node<T>& self) {
      Index o = 0;
      for (const auto& n : nodes) {
        if (n->requires_grad) n->accumulate(self.grad.middleRows(o, n->value.rows()));
        o += n->value.rows();
      }
    });
  }

  /// Row-major reinterpretation.
  Var<T> reshape(const Var<T>& a, Index rows, Index cols) {
    check(rows * cols == a.value().size(), "reshape");
    Matrix<T> y = Eigen::Map<const Matrix<T>>(a.value().data(), rows, cols);
    return record(std::move(y), {a}, [pa = a.node()](Node<T>& self) {
      if (!pa->requires_grad) return;
      pa->accumulate(Eigen::Map<const Matrix<T>>(self.grad.data(), pa->value.rows(), pa->value.cols()));
    });
  }

  // ---- reductions / normalization ----

  /// Mean over rows -> [1 x cols].
  Var<T> mean_rows(const Var<T>& a) {
    check(a.rows() > 0, "mean_rows");
    const T inv = T(1) / static_cast<T>(a.rows());
    return record(a.value().colwise().sum() * inv, {a}, [pa = a.node(), inv](Node<T>& self) {
      if (!pa->requires_grad) return;
      pa->accumulate(self.grad.replicate(pa->value.rows(), 1) * inv);
    });
  }

  /// Column-wise max over rows -> [1 x cols]; ties route to the first row.
  Var<T> max_rows(const Var<T>& a) {
    check(a.rows() > 0, "max_rows");
    std::vector<Index> arg(static_cast<std::size_t>(a.cols()), 0);
    Matrix<T> y(1, a.cols());
    for (Index c = 0; c < a.cols(); ++c) {
      Index best = 0;
      for (Index r = 1; r < a.rows(); ++r) {
        if (a.value()(r, c) > a.value()(best, c)) best = r;
      }
      arg[static_cast<std::size_t>(c)] = best;
      y(0, c) = a.value()(best, c);
    }
    return record(std::move(y), {a}, [pa = a.node(), arg = std::move(arg)](Node<T>& self) {
      if (!pa->requires_grad) return;
      ensure_grad(*pa);
      for (std::size_t c = 0; c < arg.size(); ++c) {
        pa->grad(arg[c], static_cast<Index>(c)) += self.grad(0, static_cast<Index>(c));
      }
    });
  }

  /// Per-row layer normalization with affine gain/bias of shape [1 x cols].
  Var<T> layer_norm(const Var<T>& x, const Var<T>& gamma, const Var<T>& beta, T eps) {
    const Index n = x.cols();
    check(gamma.cols() == n && beta.cols() == n && gamma.rows() == 1 && beta.rows() == 1, "layer_norm");
    Matrix<T> xhat(x.rows(), n);
    RowVector<T> inv_std(x.rows());
    for (Index r = 0; r < x.rows(); ++r) {
      const auto row = x.value().row(r);
      const T mu = row.mean();
      const T var = (row.array() - mu).square().mean();
      inv_std(r) = T(1) / std::sqrt(var + eps);
      xhat.row(r) = (row.array() - mu) * inv_std(r);
    }
    Matrix<T> y = xhat.array().rowwise() * gamma.value().row(0).array();
    y.rowwise() += beta.value().row(0);
    return record(std::move(y), {x, gamma, beta},
                  [px = x.node(), pg = gamma.node(), pb = beta.node(), xhat = std::move(xhat),
                   inv_std = std::move(inv_std)](Node<T>& self) {
                    if (pg->requires_grad) pg->accumulate(self.grad.cwiseProduct(xhat).colwise().sum());
                    if (pb->requires_grad) pb->accumulate(self.grad.colwise().sum());
                    if (!px->requires_grad) return;
                    Matrix<T> gx(xhat.rows(), xhat.cols());
                    for (Index r = 0; r < xhat.rows(); ++r) {
                      const RowVector<T> gh = self.grad.row(r).cwiseProduct(pg->value.row(0));
                      const T m1 = gh.mean();
                      const T m2 = gh.cwiseProduct(xhat.row(r)).mean();
                      gx.row(r) = (gh.array() - m1 - xhat.row(r).array() * m2) * inv_std(r);
                    }
                    px->accumulate(gx);
                  });
  }

  /// Row softmax. Columns with key_mask[c] == 0 get exactly zero weight; an
  /// empty mask means every column is a valid key.
  Var<T> masked_softmax(const Var<T>& s, std::span<const std::uint8_t> key_mask = {}) {
    check(key_mask.empty() || static_cast<Index>(key_mask.size()) == s.cols(), "masked_softmax");
    Matrix<T> y = Matrix<T>::Zero(s.rows(), s.cols());
    if (!key_mask.empty() && std::find(key_mask.begin(), key_mask.end(), 1) == key_mask.end()) {
      throw std::invalid_argument("masked_softmax: no valid key");
    }
    for (Index r = 0; r < s.rows(); ++r) {
      T mx = -std::numeric_limits<T>::infinity();
      for (Index c = 0; c < s.cols(); ++c) {
        if (key_mask.empty() || key_mask[static_cast<std::size_t>(c)]) mx = std::max(mx, s.value()(r, c));
      }
      // Non-finite scores propagate as NaN so the loss check reports them.
      if (!std::isfinite(mx)) {
        y.row(r).setConstant(std::numeric_limits<T>::quiet_NaN());
        continue;
      }
      T sum = 0;
      for (Index c = 0; c < s.cols(); ++c) {
        if (key_mask.empty() || key_mask[static_cast<std::size_t>(c)]) {
          y(r, c) = std::exp(s.value()(r, c) - mx);
          sum += y(r, c);
        }
      }
      y.row(r) /= sum;
    }
    return record(std::move(y), {s}, [ps = s.node()](Node<T>& self) {
      if (!ps->requires_grad) return;
      const auto& y = self.value;
      const Matrix<T> gy = self.grad.cwiseProduct(y);
      Matrix<T> g = gy - (y.array().colwise() * gy.rowwise().sum().array()).matrix();
      ps->accumulate(g);
    });
  }

  /// Mean negative log-likelihood of one row of logits against `gold`,
  /// multiplied by `weight`. Returns [1 x 1].
  Var<T> cross_entropy(const Var<T>& logits, Index gold, T weight = T(1)) {
    check(logits.rows() == 1 && gold >= 0 && gold < logits.cols(), "cross_entropy");
    const auto row = logits.value().row(0);
    const T mx = row.maxCoeff();
    const T lse = mx + std::log((row.array() - mx).exp().sum());
    Matrix<T> loss(1, 1);
    loss(0, 0) = weight * (lse - row(gold));
    return record(std::move(loss), {logits}, [pl = logits.node(), gold, weight, lse](Node<T>& self) {
      if (!pl->requires_grad) return;
      Matrix<T> p = (pl->value.array() - lse).exp().matrix();
      p(0, gold) -= T(1);
      pl->accumulate(p * (weight * self.grad(0, 0)));
    });
  }

  // ---- sequence helpers ----

  /// Sliding windows for a 1-D convolution along rows with zero padding:
  /// out[t, j*D + d] = x[t - left + j, d]. Output is [L x k*D].
  Var<T> unfold(const Var<T>& x, Index k, Index left) {
    const Index L = x.rows();
    const Index D = x.cols();
    Matrix<T> y = Matrix<T>::Zero(L, k * D);
    for (Index t = 0; t < L; ++t) {
      for (Index j = 0; j < k; ++j) {
        const Index src = t - left + j;
        if (src >= 0 && src < L) y.block(t, j * D, 1, D) = x.value().row(src);
      }
    }
    return record(std::move(y), {x}, [px = x.node(), k, left](Node<T>& self) {
      if (!px->requires_grad) return;
      ensure_grad(*px);
      const Index L = px->value.rows();
      const Index D = px->value.cols();
      for (Index t = 0; t < L; ++t) {
        for (Index j = 0; j < k; ++j) {
          const Index src = t - left + j;
          if (src >= 0 && src < L) px->grad.row(src) += self.grad.block(t, j * D, 1, D);
        }
      }
    });
  }

  /// Rows of `table` selected by `ids`.
  Var<T> gather_rows(const Var<T>& table, std::vector<Index> ids) {
    Matrix<T> y(static_cast<Index>(ids.size()), table.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      check(ids[i] >= 0 && ids[i] < table.rows(), "gather_rows id");
      y.row(static_cast<Index>(i)) = table.value().row(ids[i]);
    }
    return record(std::move(y), {table}, [pt = table.node(), ids = std::move(ids)](Node<T>& self) {
      if (!pt->requires_grad) return;
      ensure_grad(*pt);
      for (std::size_t i = 0; i < ids.size(); ++i) pt->grad.row(ids[i]) += self.grad.row(static_cast<Index>(i));
    });
  }

  std::size_t size() const { return tape_.size(); }

 private:
  using BackwardFn = std::function<void(Node<T>&)>;

  static void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("shape mismatch in ") + what);
  }

  static void ensure_grad(Node<T>& n) {
    if (n.grad.size() == 0) n.grad = Matrix<T>::Zero(n.value.rows(), n.value.cols());
  }

  Var<T> record(Matrix<T> value, std::initializer_list<Var<T>> parents, BackwardFn fn) {
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    bool needs = false;
    if (grad_enabled_) {
      for (const auto& p : parents) needs = needs || p.requires_grad();
    }
    if (needs) {
      n->requires_grad = true;
      n->backward = std::move(fn);
      tape_.push_back(n);
    }
    return Var<T>(std::move(n));
  }

  Var<T> record_many(Matrix<T> value, const std::vector<NodePtr<T>>& parents, BackwardFn fn) {
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    bool needs = false;
    if (grad_enabled_) {
      for (const auto& p : parents) needs = needs || p->requires_grad;
    }
    if (needs) {
      n->requires_grad = true;
      n->backward = std::move(fn);
      tape_.push_back(n);
    }
    return Var<T>(std::move(n));
  }

  bool grad_enabled_;
  std::vector<NodePtr<T>> tape_;
};

}  // namespace bnhate::nn
