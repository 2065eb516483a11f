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

#include "graybox/whitebox.hpp"

#include <vector>

#include "graybox/error.hpp"
#include "graybox/parallel.hpp"

namespace graybox {

const char* to_string(WhiteboxGradient method) {
  return method == WhiteboxGradient::Tangent ? "tangent" : "central-difference";
}

std::array<Mat2<double>, 6> post_states(const Operator2& unitary) {
  std::array<Mat2<double>, 6> out;
  for (std::size_t s = 0; s < 6; ++s) {
    out[s] = to_mat2(conjugate(unitary, density(kCardinalStates[s])));
  }
  return out;
}

WhiteboxCache::WhiteboxCache(const DeviceConfig& config) : sim_(config.ideal()) {}

WhiteboxEntry WhiteboxCache::compute(double theta) const {
  ControlParams params{theta, 0.0};
  params.validate();
  WhiteboxEntry entry;
  entry.theta = theta;
  entry.unitary = sim_.evolve_noiseless(params);
  entry.post_states = post_states(entry.unitary);
  return entry;
}

const WhiteboxEntry& WhiteboxCache::get(double theta) {
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(theta);
    if (it != entries_.end()) return *it->second;
  }
  auto entry = std::make_unique<WhiteboxEntry>(compute(theta));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.try_emplace(theta, std::move(entry));
  return *it->second;
}

void WhiteboxCache::warm(std::span<const double> thetas) {
  parallel_for(thetas.size(), [&](std::size_t i) { (void)get(thetas[i]); });
}

std::size_t WhiteboxCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

WhiteboxJet WhiteboxCache::jet(double theta, WhiteboxGradient method, double step) const {
  WhiteboxJet out;
  Operator2 du;
  if (method == WhiteboxGradient::Tangent) {
    ControlParams params{theta, 0.0};
    params.validate();
    const auto tangent = sim_.evolve_with_tangent(params);
    out.entry.theta = theta;
    out.entry.unitary = tangent.unitary;
    out.entry.post_states = post_states(tangent.unitary);
    du = tangent.derivative;
  } else {
    if (!(step > 0.0)) throw ValidationError("whitebox: finite-difference step must be positive");
    out.entry = compute(theta);
    // Evaluated outside [0, 2pi] near the edges: the pulse itself is defined
    // for any real area, only the control range is restricted.
    const Operator2 up = sim_.evolve_noiseless({theta + step, 0.0});
    const Operator2 dn = sim_.evolve_noiseless({theta - step, 0.0});
    du = (1.0 / (2.0 * step)) * (up - dn);
  }
  const Operator2& u = out.entry.unitary;
  for (std::size_t s = 0; s < 6; ++s) {
    const Operator2 rho = density(kCardinalStates[s]);
    const Operator2 left = du * rho * u.adjoint();
    out.derivatives[s] = to_mat2(left + left.adjoint());
  }
  return out;
}

}  // namespace graybox
