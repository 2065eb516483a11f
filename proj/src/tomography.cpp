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

#include "graybox/tomography.hpp"

#include <cmath>

#include "graybox/error.hpp"

namespace graybox {

std::string channel_name(std::size_t channel) {
  static constexpr const char* kObs[] = {"X", "Y", "Z"};
  if (channel >= kChannelCount) throw ValidationError("channel_name: index out of range");
  return std::string(kObs[channel / 6]) + "_" +
         to_string(kCardinalStates[channel % 6]);
}

Operator2 observable_operator(Observable o) {
  switch (o) {
    case Observable::X: return sigma_x();
    case Observable::Y: return sigma_y();
    case Observable::Z: return sigma_z();
  }
  throw ValidationError("observable_operator: unknown observable");
}

PauliTransferMatrix PauliTransferMatrix::identity() {
  PauliTransferMatrix r;
  for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
  return r;
}

Expectations exact_expectations(const Operator2& unitary) {
  Expectations out{};
  for (Observable o : kObservables) {
    const Operator2 obs = observable_operator(o);
    for (CardinalState s : kCardinalStates) {
      out[channel_index(o, s)] = expectation(obs, conjugate(unitary, density(s)));
    }
  }
  return out;
}

PauliTransferMatrix ptm_from_expectations(const Expectations& exps) {
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    if (!(exps[c] >= -1.0 && exps[c] <= 1.0)) {
      throw ValidationError("ptm_from_expectations: value for " + channel_name(c) +
                            " outside [-1, 1]");
    }
  }
  PauliTransferMatrix r;
  r(0, 0) = 1.0;
  for (int p = 1; p < 4; ++p) {
    const std::size_t row = 6 * static_cast<std::size_t>(p - 1);
    r(p, 0) = 0.5 * (exps[row + 4] + exps[row + 5]);
    for (int q = 1; q < 4; ++q) {
      const std::size_t plus = row + 2 * static_cast<std::size_t>(q - 1);
      r(p, q) = 0.5 * (exps[plus] - exps[plus + 1]);
    }
  }
  return r;
}

PauliTransferMatrix ptm_of_unitary(const Operator2& unitary) {
  static constexpr Pauli kBasis[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  PauliTransferMatrix r;
  for (int i = 0; i < 4; ++i) {
    const Operator2 pi = pauli(kBasis[i]);
    for (int j = 0; j < 4; ++j) {
      r(i, j) = 0.5 * (pi * conjugate(unitary, pauli(kBasis[j]))).trace().real();
    }
  }
  return r;
}

double average_gate_fidelity(const PauliTransferMatrix& measured, const Operator2& target) {
  if (!target.is_unitary(1e-9)) {
    throw ValidationError("average_gate_fidelity: target is not unitary");
  }
  const PauliTransferMatrix ideal = ptm_of_unitary(target);
  double overlap = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) overlap += ideal(i, j) * measured(i, j);
  }
  return (overlap / 2.0 + 1.0) / 3.0;
}

}  // namespace graybox
