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

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "graybox/autodiff.hpp"
#include "graybox/quantum.hpp"

namespace graybox {

/// Minimal complex number over an arbitrary scalar (double or ad::Var).
template <typename T>
struct Cplx {
  T re{};
  T im{};

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator*(const T& s, const Cplx& a) { return {s * a.re, s * a.im}; }
  Cplx conj() const { return {re, T(0.0) - im}; }
};

/// Row-major 2x2 matrix over Cplx<T>.
template <typename T>
struct Mat2 {
  std::array<Cplx<T>, 4> m{};

  const Cplx<T>& operator()(int r, int c) const { return m[2 * r + c]; }
  Cplx<T>& operator()(int r, int c) { return m[2 * r + c]; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    }
    return out;
  }
  Mat2 adjoint() const {
    Mat2 out;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) out(r, c) = (*this)(c, r).conj();
    }
    return out;
  }
};

Mat2<double> to_mat2(const Operator2& op);
Operator2 to_operator(const Mat2<double>& m);

/// Re Tr[W rho] for Hermitian W and rho.
template <typename T, typename S>
T trace_real(const Mat2<T>& w, const Mat2<S>& rho) {
  T acc = w(0, 0).re * rho(0, 0).re - w(0, 0).im * rho(0, 0).im;
  acc = acc + (w(1, 1).re * rho(1, 1).re - w(1, 1).im * rho(1, 1).im);
  acc = acc + (w(0, 1).re * rho(1, 0).re - w(0, 1).im * rho(1, 0).im);
  acc = acc + (w(1, 0).re * rho(0, 1).re - w(1, 0).im * rho(0, 1).im);
  return acc;
}

/// Flat parameter layout: shared dense 4->5, three Pauli dense 5->5 (X, Y, Z),
/// three Hermitian heads 5->5 (X, Y, Z). Each dense layer stores its weight
/// matrix row-major (outputs x inputs) followed by the bias vector.
struct BlackboxLayout {
  static constexpr std::size_t kFeatures = 4;
  static constexpr std::size_t kHidden = 5;
  static constexpr std::size_t kHeadOutputs = 5;
  static constexpr std::size_t kShared = kHidden * (kFeatures + 1);
  static constexpr std::size_t kPauliLayer = kHidden * (kHidden + 1);
  static constexpr std::size_t kHead = kHeadOutputs * (kHidden + 1);
  static constexpr std::size_t kParameterCount = kShared + 3 * kPauliLayer + 3 * kHead;

  static constexpr std::size_t pauli_offset(std::size_t o) { return kShared + o * kPauliLayer; }
  static constexpr std::size_t head_offset(std::size_t o) {
    return kShared + 3 * kPauliLayer + o * kHead;
  }
};
static_assert(BlackboxLayout::kParameterCount == 205);

/// JSON description of the layout, stored in checkpoints.
std::string architecture_descriptor();

class BlackboxParams {
 public:
  BlackboxParams() : values_(BlackboxLayout::kParameterCount, 0.0) {}
  explicit BlackboxParams(std::vector<double> values);

  /// Per-layer uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) for weights and biases.
  static BlackboxParams initialize(std::uint64_t seed);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  std::vector<double> values_;
};

/// (x, x^2, x^3, x^4) with x = theta / 2pi.
template <typename T>
std::array<T, 4> feature_map(const T& theta) {
  const T x = theta * (1.0 / (2.0 * std::numbers::pi));
  const T x2 = x * x;
  return {x, x2, x2 * x, x2 * x2};
}

/// Constrained parameters of one Hermitian head.
template <typename T>
struct HeadOutput {
  T theta{};
  T alpha{};
  T beta{};
  T lambda1{};
  T lambda2{};
};
using HermitianHeadOutput = HeadOutput<double>;

namespace detail {

template <typename T, std::size_t In, std::size_t Out>
std::array<T, Out> dense(std::span<const T> params, std::size_t offset, const std::array<T, In>& in) {
  std::array<T, Out> out;
  for (std::size_t o = 0; o < Out; ++o) {
    T acc = params[offset + Out * In + o];
    for (std::size_t i = 0; i < In; ++i) acc = acc + params[offset + o * In + i] * in[i];
    out[o] = acc;
  }
  return out;
}

}  // namespace detail

/// Feature map -> shared dense + ReLU -> per-Pauli dense + ReLU -> head dense
/// -> hard sigmoid, rescaled to angles in [0, 2pi] and eigenvalues in [-1, 1].
template <typename T>
std::array<HeadOutput<T>, 3> blackbox_heads(std::span<const T> params, const T& theta) {
  using L = BlackboxLayout;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto features = feature_map(theta);
  auto shared = detail::dense<T, L::kFeatures, L::kHidden>(params, 0, features);
  for (auto& v : shared) v = relu(v);
  std::array<HeadOutput<T>, 3> heads;
  for (std::size_t o = 0; o < 3; ++o) {
    auto hidden = detail::dense<T, L::kHidden, L::kHidden>(params, L::pauli_offset(o), shared);
    for (auto& v : hidden) v = relu(v);
    const auto raw = detail::dense<T, L::kHidden, L::kHeadOutputs>(params, L::head_offset(o), hidden);
    heads[o].theta = kTwoPi * hard_sigmoid(raw[0]);
    heads[o].alpha = kTwoPi * hard_sigmoid(raw[1]);
    heads[o].beta = kTwoPi * hard_sigmoid(raw[2]);
    heads[o].lambda1 = 2.0 * hard_sigmoid(raw[3]) - 1.0;
    heads[o].lambda2 = 2.0 * hard_sigmoid(raw[4]) - 1.0;
  }
  return heads;
}

/// U(theta, alpha, beta) = [[e^{i alpha} cos, e^{i beta} sin], [-e^{-i beta} sin, e^{-i alpha} cos]].
template <typename T>
Mat2<T> head_unitary(const T& theta, const T& alpha, const T& beta) {
  using std::cos;
  using std::sin;
  const T c = cos(theta);
  const T s = sin(theta);
  const T ca = cos(alpha), sa = sin(alpha);
  const T cb = cos(beta), sb = sin(beta);
  Mat2<T> u;
  u(0, 0) = {ca * c, sa * c};
  u(0, 1) = {cb * s, sb * s};
  u(1, 0) = {T(0.0) - cb * s, sb * s};
  u(1, 1) = {ca * c, T(0.0) - sa * c};
  return u;
}

/// W = U D U^dagger with D = diag(lambda1, lambda2).
template <typename T>
Mat2<T> hermitian_from_head(const HeadOutput<T>& h) {
  const Mat2<T> u = head_unitary(h.theta, h.alpha, h.beta);
  Mat2<T> ud = u;
  for (int r = 0; r < 2; ++r) {
    ud(r, 0) = h.lambda1 * u(r, 0);
    ud(r, 1) = h.lambda2 * u(r, 1);
  }
  return ud * u.adjoint();
}

/// The three distorted observables (W_X, W_Y, W_Z) at a control value.
template <typename T>
std::array<Mat2<T>, 3> blackbox_observables(std::span<const T> params, const T& theta) {
  const auto heads = blackbox_heads(params, theta);
  return {hermitian_from_head(heads[0]), hermitian_from_head(heads[1]),
          hermitian_from_head(heads[2])};
}

std::array<HermitianHeadOutput, 3> head_outputs(const BlackboxParams& params, double theta);
std::array<Operator2, 3> blackbox_forward(const BlackboxParams& params, double theta);

}  // namespace graybox
