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
#include <map>
#include <memory>
#include <mutex>
#include <span>

#include "graybox/blackbox.hpp"
#include "graybox/device.hpp"

namespace graybox {

/// Ideal evolution at one control value: U0 and the six post-states U0 rho U0^dagger
/// in cardinal-state order.
struct WhiteboxEntry {
  double theta = 0.0;
  Operator2 unitary;
  std::array<Mat2<double>, 6> post_states;
};

/// Post-states and their theta-derivatives, for control calibration.
struct WhiteboxJet {
  WhiteboxEntry entry;
  std::array<Mat2<double>, 6> derivatives;
};

enum class WhiteboxGradient { CentralDifference, Tangent };
const char* to_string(WhiteboxGradient method);

/// Thread-safe memo of ideal evolutions keyed by the exact theta value.
/// Entries are never evicted, so returned references stay valid.
class WhiteboxCache {
 public:
  /// Uses config.ideal(): the same pulse with detuning and noise removed.
  explicit WhiteboxCache(const DeviceConfig& config);

  const WhiteboxEntry& get(double theta);
  /// Fills the cache for many values in parallel.
  void warm(std::span<const double> thetas);
  std::size_t size() const;

  WhiteboxJet jet(double theta, WhiteboxGradient method, double step = 1e-4) const;
  const DeviceSimulator& simulator() const { return sim_; }

 private:
  WhiteboxEntry compute(double theta) const;

  DeviceSimulator sim_;
  mutable std::mutex mutex_;
  std::map<double, std::unique_ptr<WhiteboxEntry>> entries_;
};

std::array<Mat2<double>, 6> post_states(const Operator2& unitary);

/// Graybox prediction Tr[W_O(theta) U0 rho U0^dagger] for the 18 channels.
template <typename T, typename S>
std::array<T, kChannelCount> graybox_expectations(std::span<const T> params, const T& theta,
                                                  const std::array<Mat2<S>, 6>& post) {
  const auto w = blackbox_observables(params, theta);
  std::array<T, kChannelCount> out;
  for (std::size_t o = 0; o < 3; ++o) {
    for (std::size_t s = 0; s < 6; ++s) out[6 * o + s] = trace_real(w[o], post[s]);
  }
  return out;
}

}  // namespace graybox
