// Copyright 2026 The Graybox Authors
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
#include <span>
#include <string>
#include <vector>

#include "graybox/error.hpp"

namespace graybox::ad {

class Tape;

/// A scalar on a reverse-mode tape. A Var without a tape is a constant, which
/// lets generic code mix Vars and plain numbers.
class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT: implicit constant

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  std::uint32_t index() const { return index_; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t index, double value) : tape_(tape), index_(index), value_(value) {}

  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
  double value_ = 0.0;
};

/// Wengert list: every node records at most two parents with the local
/// partial derivatives, so the reverse sweep is a single backward loop.
class Tape {
 public:
  Var variable(double value);
  Var unary(const Var& x, double value, double dx);
  Var binary(const Var& x, double dx, const Var& y, double dy, double value);

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  /// Drops every node recorded after the first `n`.
  void truncate(std::size_t n) {
    if (n < nodes_.size()) nodes_.resize(n);
  }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  /// Fills adjoint[i] = d output / d node_i for every node.
  void backward(const Var& output, std::vector<double>& adjoint) const;
  /// d output / d wrt[i].
  std::vector<double> gradient(const Var& output, std::span<const Var> wrt) const;

 private:
  struct Node {
    std::uint32_t parent[2];
    double partial[2];
  };
  std::uint32_t push(std::uint32_t p0, double d0, std::uint32_t p1, double d1);

  std::vector<Node> nodes_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

Var sin(const Var& x);
Var cos(const Var& x);
Var exp(const Var& x);
Var log(const Var& x);
Var sqrt(const Var& x);
Var square(const Var& x);
Var relu(const Var& x);
Var hard_sigmoid(const Var& x);
Var softplus(const Var& x);
/// Clamped value; the gradient is zero where clamping is active.
Var clamp(const Var& x, double lo, double hi);

inline double value_of(const Var& x) { return x.value(); }

/// Reverse-mode gradient of loss(tape, params) with respect to params.
/// Throws NumericError (carrying the parameters) on a non-finite loss.
template <typename Loss>
std::vector<double> gradient(Loss&& loss, std::span<const double> params, double* value = nullptr) {
  Tape tape;
  std::vector<Var> leaves;
  leaves.reserve(params.size());
  for (double p : params) leaves.push_back(tape.variable(p));
  const Var out = loss(tape, std::span<const Var>(leaves));
  if (!std::isfinite(out.value())) {
    throw NumericError("gradient: non-finite loss", std::vector<double>(params.begin(), params.end()));
  }
  if (value != nullptr) *value = out.value();
  return tape.gradient(out, leaves);
}

}  // namespace graybox::ad

namespace graybox {

// Plain-double counterparts so templates can call these unqualified.
inline double square(double x) { return x * x; }
inline double relu(double x) { return x > 0.0 ? x : 0.0; }
inline double hard_sigmoid(double x) {
  const double y = x / 6.0 + 0.5;
  return y < 0.0 ? 0.0 : (y > 1.0 ? 1.0 : y);
}
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double clamp(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }
inline double value_of(double x) { return x; }

}  // namespace graybox
