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

#include "graybox/blackbox.hpp"

#include <cmath>
#include <random>

#include "graybox/error.hpp"
#include "graybox/rng.hpp"

namespace graybox {

Mat2<double> to_mat2(const Operator2& op) {
  Mat2<double> m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = {op(r, c).real(), op(r, c).imag()};
  }
  return m;
}

Operator2 to_operator(const Mat2<double>& m) {
  return {Complex(m(0, 0).re, m(0, 0).im), Complex(m(0, 1).re, m(0, 1).im),
          Complex(m(1, 0).re, m(1, 0).im), Complex(m(1, 1).re, m(1, 1).im)};
}

std::string architecture_descriptor() {
  return R"j({"feature_map":"poly4(theta/2pi)","layers":[)j"
         R"j({"name":"shared","in":4,"out":5,"activation":"relu"},)j"
         R"j({"name":"pauli","copies":3,"in":5,"out":5,"activation":"relu"},)j"
         R"j({"name":"hermitian_head","copies":3,"in":5,"out":5,"activation":"hard_sigmoid"}],)j"
         R"j("order":"shared,pauli[X,Y,Z],head[X,Y,Z]; weights row-major (out x in) then bias",)j"
         R"j("parameter_count":205})j";
}

BlackboxParams::BlackboxParams(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() != BlackboxLayout::kParameterCount) {
    throw ValidationError("BlackboxParams: expected 205 values, got " +
                          std::to_string(values_.size()));
  }
}

BlackboxParams BlackboxParams::initialize(std::uint64_t seed) {
  using L = BlackboxLayout;
  BlackboxParams p;
  Rng rng = make_rng(seed, "blackbox-init", 0);
  auto fill = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < count; ++i) p.values_[offset + i] = dist(rng);
  };
  fill(0, L::kShared, L::kFeatures);
  for (std::size_t o = 0; o < 3; ++o) fill(L::pauli_offset(o), L::kPauliLayer, L::kHidden);
  for (std::size_t o = 0; o < 3; ++o) fill(L::head_offset(o), L::kHead, L::kHidden);
  return p;
}

std::array<HermitianHeadOutput, 3> head_outputs(const BlackboxParams& params, double theta) {
  return blackbox_heads<double>(params.values(), theta);
}

std::array<Operator2, 3> blackbox_forward(const BlackboxParams& params, double theta) {
  const auto w = blackbox_observables<double>(params.values(), theta);
  return {to_operator(w[0]), to_operator(w[1]), to_operator(w[2])};
}

}  // namespace graybox
