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
#include <memory>
#include <span>
#include <vector>

#include "graybox/rng.hpp"

namespace graybox {

/// S(f) = 1/(f+1) + 0.8 exp(-(f-15)^2/10), the default control-noise spectrum.
/// Frequencies are in GHz when times are in ns.
double psd_value(double f);

/// Spectrum a/(f+b) + c exp(-(f-f0)^2/w) together with its discretisation.
/// The defaults reproduce psd_value().
struct PsdSpec {
  double pink_amplitude = 1.0;
  double pink_offset = 1.0;
  double peak_amplitude = 0.8;
  double peak_center = 15.0;
  double peak_width = 10.0;
  double f_max = 50.0;
  std::size_t n_freq = 500;

  static PsdSpec zero();

  double value(double f) const;
  double bin_width() const { return f_max / static_cast<double>(n_freq); }
  /// Bin-centre frequency (k + 1/2) df.
  double frequency(std::size_t k) const { return (static_cast<double>(k) + 0.5) * bin_width(); }
  /// sum_k S(f_k) df, the variance of every sample of a synthesised trace.
  double discrete_variance() const;
  void validate() const;
};

struct NoiseTrace {
  std::vector<double> samples;
  double dt_step = 0.0;
};

/// Spectral-representation synthesis
///   n(t_j) = sum_k sqrt(2 S(f_k) df) cos(2 pi f_k t_j + phi_k),
/// phi_k ~ U[0, 2 pi), evaluated on step midpoints t_j = (j + 1/2) dt.
/// The cosine sum is evaluated exactly as a chirp-z transform, so one trace
/// costs two FFTs instead of steps * n_freq cosines.
class NoiseSynthesizer {
 public:
  NoiseSynthesizer(const PsdSpec& psd, std::size_t steps, double horizon);
  ~NoiseSynthesizer();
  NoiseSynthesizer(NoiseSynthesizer&&) noexcept;
  NoiseSynthesizer& operator=(NoiseSynthesizer&&) noexcept;

  std::size_t steps() const;
  double dt_step() const;

  /// Draws n_freq phases from rng (in frequency order) and writes the trace.
  void sample_into(Rng& rng, std::span<double> out) const;
  NoiseTrace sample(Rng& rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

NoiseTrace sample_noise_trace(const PsdSpec& psd, std::size_t steps, double horizon, Rng& rng);

}  // namespace graybox
