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

#include "graybox/autodiff.hpp"

#include <limits>
#include <stdexcept>

namespace graybox::ad {
namespace {

Tape* common_tape(const Var& a, const Var& b) {
  Tape* t = a.tape() != nullptr ? a.tape() : b.tape();
  if (a.tape() != nullptr && b.tape() != nullptr && a.tape() != b.tape()) {
    throw std::logic_error("autodiff: operands recorded on different tapes");
  }
  return t;
}

}  // namespace

std::uint32_t Tape::push(std::uint32_t p0, double d0, std::uint32_t p1, double d1) {
  if (nodes_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("autodiff: tape is full");
  }
  nodes_.push_back(Node{{p0, p1}, {d0, d1}});
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

Var Tape::variable(double value) { return Var(this, push(0, 0.0, 0, 0.0), value); }

Var Tape::unary(const Var& x, double value, double dx) {
  if (x.is_constant()) return Var(value);
  return Var(this, push(x.index(), dx, 0, 0.0), value);
}

Var Tape::binary(const Var& x, double dx, const Var& y, double dy, double value) {
  // Constant operands are routed to node 0 with a zero partial.
  const std::uint32_t px = x.is_constant() ? 0 : x.index();
  const std::uint32_t py = y.is_constant() ? 0 : y.index();
  return Var(this, push(px, x.is_constant() ? 0.0 : dx, py, y.is_constant() ? 0.0 : dy), value);
}

void Tape::backward(const Var& output, std::vector<double>& adjoint) const {
  adjoint.assign(nodes_.size(), 0.0);
  if (output.is_constant()) return;
  adjoint[output.index()] = 1.0;
  for (std::size_t i = output.index() + 1; i-- > 0;) {
    const double g = adjoint[i];
    if (g == 0.0) continue;
    const Node& n = nodes_[i];
    adjoint[n.parent[0]] += n.partial[0] * g;
    adjoint[n.parent[1]] += n.partial[1] * g;
  }
}

std::vector<double> Tape::gradient(const Var& output, std::span<const Var> wrt) const {
  std::vector<double> adjoint;
  backward(output, adjoint);
  std::vector<double> out(wrt.size(), 0.0);
  for (std::size_t i = 0; i < wrt.size(); ++i) {
    if (!wrt[i].is_constant()) out[i] = adjoint[wrt[i].index()];
  }
  return out;
}

Var operator+(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() + b.value();
  return t ? t->binary(a, 1.0, b, 1.0, v) : Var(v);
}

Var operator-(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() - b.value();
  return t ? t->binary(a, 1.0, b, -1.0, v) : Var(v);
}

Var operator*(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() * b.value();
  return t ? t->binary(a, b.value(), b, a.value(), v) : Var(v);
}

Var operator/(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() / b.value();
  return t ? t->binary(a, 1.0 / b.value(), b, -v / b.value(), v) : Var(v);
}

Var operator-(const Var& a) {
  return a.tape() ? a.tape()->unary(a, -a.value(), -1.0) : Var(-a.value());
}

namespace {
template <typename F, typename D>
Var apply(const Var& x, F f, D df) {
  const double v = f(x.value());
  return x.tape() ? x.tape()->unary(x, v, df(x.value(), v)) : Var(v);
}
}  // namespace

Var sin(const Var& x) {
  return apply(x, [](double u) { return std::sin(u); }, [](double u, double) { return std::cos(u); });
}
Var cos(const Var& x) {
  return apply(x, [](double u) { return std::cos(u); }, [](double u, double) { return -std::sin(u); });
}
Var exp(const Var& x) {
  return apply(x, [](double u) { return std::exp(u); }, [](double, double v) { return v; });
}
Var log(const Var& x) {
  return apply(x, [](double u) { return std::log(u); }, [](double u, double) { return 1.0 / u; });
}
Var sqrt(const Var& x) {
  return apply(x, [](double u) { return std::sqrt(u); }, [](double, double v) { return 0.5 / v; });
}
Var square(const Var& x) {
  return apply(x, [](double u) { return u * u; }, [](double u, double) { return 2.0 * u; });
}
Var relu(const Var& x) {
  return apply(x, [](double u) { return graybox::relu(u); },
               [](double u, double) { return u > 0.0 ? 1.0 : 0.0; });
}
Var hard_sigmoid(const Var& x) {
  // Linear branch on the closed interval [-3, 3].
  return apply(x, [](double u) { return graybox::hard_sigmoid(u); },
               [](double u, double) { return (u >= -3.0 && u <= 3.0) ? 1.0 / 6.0 : 0.0; });
}
Var softplus(const Var& x) {
  return apply(x, [](double u) { return graybox::softplus(u); },
               [](double u, double) { return 1.0 / (1.0 + std::exp(-u)); });
}
Var clamp(const Var& x, double lo, double hi) {
  return apply(x, [=](double u) { return graybox::clamp(u, lo, hi); },
               [=](double u, double) { return (u >= lo && u <= hi) ? 1.0 : 0.0; });
}

}  // namespace graybox::ad
