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

#include <numbers>

#include "graybox/blackbox.hpp"

namespace fixture {

/// Blackbox whose three observables are exactly sigma_x, sigma_y and sigma_z
/// for every theta: all weights vanish and the head biases select the
/// rotation angles and eigenvalues through the hard sigmoid.
inline graybox::BlackboxParams ideal_blackbox() {
  using L = graybox::BlackboxLayout;
  graybox::BlackboxParams p;
  auto values = p.values();
  // hard_sigmoid(b) = b / 6 + 1/2, so an angle a needs b = 6 (a / 2pi - 1/2).
  auto angle = [](double a) { return 6.0 * (a / (2.0 * std::numbers::pi) - 0.5); };
  const double biases[3][5] = {
      {angle(std::numbers::pi / 4.0), -4.0, angle(std::numbers::pi), 4.0, -4.0},
      {angle(std::numbers::pi / 4.0), -4.0, angle(std::numbers::pi / 2.0), 4.0, -4.0},
      {-4.0, -4.0, -4.0, 4.0, -4.0},
  };
  for (std::size_t o = 0; o < 3; ++o) {
    const std::size_t bias = L::head_offset(o) + L::kHeadOutputs * L::kHidden;
    for (std::size_t k = 0; k < 5; ++k) values[bias + k] = biases[o][k];
  }
  return p;
}

}  // namespace fixture
