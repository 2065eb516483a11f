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
#include <string>

#include "graybox/quantum.hpp"

namespace graybox {

enum class Observable { X, Y, Z };

inline constexpr std::array<Observable, 3> kObservables = {Observable::X, Observable::Y,
                                                           Observable::Z};

/// Number of (observable, initial state) pairs measured per control value.
inline constexpr std::size_t kChannelCount = 18;

/// One value per channel, ordered observable-major: X_Xp, X_Xm, ..., Z_Zm.
using Expectations = std::array<double, kChannelCount>;

constexpr std::size_t channel_index(Observable o, CardinalState s) {
  return 6 * static_cast<std::size_t>(o) + static_cast<std::size_t>(s);
}

/// "X_Xp", "Y_Zm", ...
std::string channel_name(std::size_t channel);

Operator2 observable_operator(Observable o);

/// 4x4 real Pauli transfer matrix, index order (I, X, Y, Z).
class PauliTransferMatrix {
 public:
  PauliTransferMatrix() = default;
  static PauliTransferMatrix identity();

  double& operator()(int row, int col) { return entries_[row][col]; }
  double operator()(int row, int col) const { return entries_[row][col]; }

 private:
  std::array<std::array<double, 4>, 4> entries_{};
};

/// Noise-free expectation values of the unitary channel rho -> U rho U^dagger.
Expectations exact_expectations(const Operator2& unitary);

/// PTM reconstruction: R[P][Q] = (<P>_{Q+} - <P>_{Q-}) / 2, R[P][I] = (<P>_{Z+} + <P>_{Z-}) / 2,
/// first row fixed to (1, 0, 0, 0). Inputs must lie in [-1, 1].
PauliTransferMatrix ptm_from_expectations(const Expectations& exps);

/// R[i][j] = Tr[P_i U P_j U^dagger] / 2.
PauliTransferMatrix ptm_of_unitary(const Operator2& unitary);

/// F_avg = (Tr[R_target^T R] / 2 + 1) / 3 for a single qubit. Not clamped.
double average_gate_fidelity(const PauliTransferMatrix& measured, const Operator2& target);

/// Average gate fidelity straight from 18 expectation values. Generic in the
/// scalar type so the same arithmetic runs on doubles and on tape variables.
template <typename T>
T average_gate_fidelity_from(const std::array<T, kChannelCount>& exps,
                             const PauliTransferMatrix& target) {
  T overlap = T(target(0, 0));
  for (int p = 1; p < 4; ++p) {
    const std::size_t row = 6 * static_cast<std::size_t>(p - 1);
    // R[P][I] from the two Z eigenstates.
    if (target(p, 0) != 0.0) overlap = overlap + target(p, 0) * 0.5 * (exps[row + 4] + exps[row + 5]);
    for (int q = 1; q < 4; ++q) {
      if (target(p, q) == 0.0) continue;
      const std::size_t plus = row + 2 * static_cast<std::size_t>(q - 1);
      overlap = overlap + target(p, q) * 0.5 * (exps[plus] - exps[plus + 1]);
    }
  }
  return (overlap * 0.5 + 1.0) * (1.0 / 3.0);
}

}  // namespace graybox
