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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graybox/noise.hpp"
#include "graybox/predictive.hpp"
#include "graybox/quantum.hpp"
#include "graybox/tomography.hpp"

namespace graybox {

/// The single control parameter theta (pulse area) and carrier phase phi.
struct ControlParams {
  double theta = 0.0;
  double phi = 0.0;

  void validate() const;
};

/// Simulated device. Times are in ns and frequencies in GHz; the pulse
/// duration is given in device samples of length `sample_time`.
struct DeviceConfig {
  double qubit_frequency = 5.0;
  double drive_frequency = 5.0;
  double drive_strength = 0.1;
  double detuning = 0.001;
  double noise_strength = 0.01;
  double duration = 320.0;
  double sample_time = 2.0 / 9.0;
  std::size_t trotter_steps = 10000;
  double max_amplitude = 0.5;
  PsdSpec psd;

  double total_time() const { return duration * sample_time; }
  double step_time() const { return total_time() / static_cast<double>(trotter_steps); }
  /// Same device with the detuning and the stochastic noise switched off.
  DeviceConfig ideal() const;
  void validate() const;
};

/// Gaussian envelope h(theta, t) with area theta / (2 pi Omega) per unit
/// sample; t in ns, centred at half the pulse duration.
double envelope(const DeviceConfig& config, double theta, double t);

/// s'(t) = h(theta, t) cos(2 pi omega_d t + phi) + delta * noise_value.
double signal(const DeviceConfig& config, const ControlParams& params, double t,
              double noise_value);

/// Per-trajectory intermediate expectation values for the 18 channels.
struct IntermediateEnsemble {
  ControlParams control;
  std::vector<Expectations> values;

  std::vector<double> channel(std::size_t c) const;
};

class DeviceSimulator {
 public:
  explicit DeviceSimulator(DeviceConfig config);

  const DeviceConfig& config() const { return config_; }
  const NoiseSynthesizer& noise() const { return noise_; }

  /// Trotter product over step midpoints, latest step leftmost. `noise`
  /// holds one sample per step.
  Operator2 evolve(const ControlParams& params, std::span<const double> noise) const;
  Operator2 evolve_noiseless(const ControlParams& params) const;

  struct Tangent {
    Operator2 unitary;
    Operator2 derivative;  // dU/dtheta
  };
  /// Noise-free evolution together with its exact theta-derivative,
  /// propagated step by step through the Trotter product.
  Tangent evolve_with_tangent(const ControlParams& params) const;

  /// M independent noise realisations, each evolved once. Trajectory i uses
  /// the stream derive_seed(seed, "trajectory", i).
  IntermediateEnsemble intermediate_ensemble(const ControlParams& params, std::size_t trajectories,
                                             std::uint64_t seed) const;

 private:
  DeviceConfig config_;
  std::vector<double> shape_;  // envelope per unit theta
  std::vector<double> drive_cos_, drive_sin_;
  std::vector<double> frame_cos_, frame_sin_;
  NoiseSynthesizer noise_;
};

/// Two-stage finite-shot estimator for one channel: each of `n_shots` draws
/// picks a hidden value with replacement and then an eigenvalue +/-1 with
/// P(+1) = (1 + v) / 2. Repeat r uses derive_seed(seed, "finite-shot", r).
std::vector<double> resample_finite_shot(std::span<const double> hidden, std::size_t n_shots,
                                         std::size_t n_repeats, std::uint64_t seed);

PredictiveDistribution finite_shot_sample(const IntermediateEnsemble& ensemble,
                                          std::size_t n_shots, std::size_t n_repeats,
                                          std::uint64_t seed);

}  // namespace graybox
