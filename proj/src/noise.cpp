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

#include "graybox/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "graybox/error.hpp"

namespace graybox {
namespace {

using Complex = std::complex<double>;

// FFTW's planner is not re-entrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer allocate(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// exp(i pi beta m^2), with beta m^2 reduced mod 2 before scaling by pi.
Complex chirp(double beta, double m, double extra = 0.0) {
  const double x = std::fmod(beta * m * m + extra, 2.0);
  return std::polar(1.0, std::numbers::pi * x);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

double psd_value(double f) {
  if (f < 0.0) throw ValidationError("psd_value: negative frequency");
  return PsdSpec{}.value(f);
}

PsdSpec PsdSpec::zero() {
  PsdSpec s;
  s.pink_amplitude = 0.0;
  s.peak_amplitude = 0.0;
  return s;
}

double PsdSpec::value(double f) const {
  if (f < 0.0) throw ValidationError("PsdSpec::value: negative frequency");
  const double d = f - peak_center;
  return pink_amplitude / (f + pink_offset) + peak_amplitude * std::exp(-d * d / peak_width);
}

double PsdSpec::discrete_variance() const {
  double total = 0.0;
  for (std::size_t k = 0; k < n_freq; ++k) total += value(frequency(k)) * bin_width();
  return total;
}

void PsdSpec::validate() const {
  if (!(f_max > 0.0)) throw ValidationError("PsdSpec: f_max must be positive");
  if (n_freq < 2) throw ValidationError("PsdSpec: n_freq must be at least 2");
  if (pink_amplitude < 0.0 || peak_amplitude < 0.0) {
    throw ValidationError("PsdSpec: amplitudes must be non-negative");
  }
  if (!(pink_offset > 0.0)) throw ValidationError("PsdSpec: pink_offset must be positive");
  if (!(peak_width > 0.0)) throw ValidationError("PsdSpec: peak_width must be positive");
}

struct NoiseSynthesizer::Impl {
  std::size_t steps = 0;
  std::size_t n_freq = 0;
  std::size_t fft_size = 0;
  double dt = 0.0;
  bool silent = true;
  std::vector<double> amplitude;
  std::vector<Complex> pre;   // exp(i pi beta (k^2 + k))
  std::vector<Complex> post;  // exp(i pi beta (j^2 + j + 1/2)) / L
  FftwBuffer filter;          // FFT of exp(-i pi beta m^2), wrapped
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

NoiseSynthesizer::NoiseSynthesizer(const PsdSpec& psd, std::size_t steps, double horizon)
    : impl_(std::make_unique<Impl>()) {
  psd.validate();
  if (steps < 2) throw ValidationError("NoiseSynthesizer: steps must be at least 2");
  if (!(horizon > 0.0)) throw ValidationError("NoiseSynthesizer: horizon must be positive");

  Impl& s = *impl_;
  s.steps = steps;
  s.n_freq = psd.n_freq;
  s.dt = horizon / static_cast<double>(steps);
  const double df = psd.bin_width();
  const double beta = df * s.dt;

  s.amplitude.resize(s.n_freq);
  for (std::size_t k = 0; k < s.n_freq; ++k) {
    s.amplitude[k] = std::sqrt(2.0 * psd.value(psd.frequency(k)) * df);
    if (s.amplitude[k] != 0.0) s.silent = false;
  }
  if (s.silent) return;

  s.fft_size = next_pow2(steps + s.n_freq - 1);
  const std::size_t L = s.fft_size;
  s.pre.resize(s.n_freq);
  for (std::size_t k = 0; k < s.n_freq; ++k) {
    const double kk = static_cast<double>(k);
    s.pre[k] = chirp(beta, kk, std::fmod(beta * kk, 2.0));
  }
  s.post.resize(steps);
  for (std::size_t j = 0; j < steps; ++j) {
    const double jj = static_cast<double>(j);
    s.post[j] = chirp(beta, jj, std::fmod(beta * (jj + 0.5), 2.0)) / static_cast<double>(L);
  }

  s.filter = allocate(L);
  FftwBuffer scratch = allocate(L);
  {
    std::lock_guard lock(planner_mutex());
    s.forward = fftw_plan_dft_1d(static_cast<int>(L), scratch.get(), scratch.get(), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    s.backward = fftw_plan_dft_1d(static_cast<int>(L), scratch.get(), scratch.get(),
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  auto* v = reinterpret_cast<Complex*>(s.filter.get());
  std::fill(v, v + L, Complex(0.0, 0.0));
  for (std::size_t m = 0; m < steps; ++m) v[m] = std::conj(chirp(beta, static_cast<double>(m)));
  for (std::size_t m = 1; m < s.n_freq; ++m) {
    v[L - m] = std::conj(chirp(beta, static_cast<double>(m)));
  }
  fftw_execute_dft(s.forward, s.filter.get(), s.filter.get());
}

NoiseSynthesizer::~NoiseSynthesizer() = default;
NoiseSynthesizer::NoiseSynthesizer(NoiseSynthesizer&&) noexcept = default;
NoiseSynthesizer& NoiseSynthesizer::operator=(NoiseSynthesizer&&) noexcept = default;

std::size_t NoiseSynthesizer::steps() const { return impl_->steps; }
double NoiseSynthesizer::dt_step() const { return impl_->dt; }

void NoiseSynthesizer::sample_into(Rng& rng, std::span<double> out) const {
  const Impl& s = *impl_;
  if (out.size() != s.steps) throw ValidationError("NoiseSynthesizer: output length mismatch");

  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> phases(s.n_freq);
  for (auto& p : phases) p = phase(rng);

  if (s.silent) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }

  FftwBuffer work = allocate(s.fft_size);
  auto* buf = reinterpret_cast<Complex*>(work.get());
  std::fill(buf, buf + s.fft_size, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < s.n_freq; ++k) {
    buf[k] = std::polar(s.amplitude[k], phases[k]) * s.pre[k];
  }
  fftw_execute_dft(s.forward, work.get(), work.get());
  const auto* filter = reinterpret_cast<const Complex*>(s.filter.get());
  for (std::size_t i = 0; i < s.fft_size; ++i) buf[i] *= filter[i];
  fftw_execute_dft(s.backward, work.get(), work.get());
  for (std::size_t j = 0; j < s.steps; ++j) out[j] = (s.post[j] * buf[j]).real();
}

NoiseTrace NoiseSynthesizer::sample(Rng& rng) const {
  NoiseTrace trace;
  trace.dt_step = impl_->dt;
  trace.samples.resize(impl_->steps);
  sample_into(rng, trace.samples);
  return trace;
}

NoiseTrace sample_noise_trace(const PsdSpec& psd, std::size_t steps, double horizon, Rng& rng) {
  return NoiseSynthesizer(psd, steps, horizon).sample(rng);
}

}  // namespace graybox
