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

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M2 = std::array<std::array<C, 2>, 2>;
using Vec2 = std::array<C, 2>;

inline M2 mul(const M2& a, const M2& b) {
  M2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline M2 dagger(const M2& a) {
  M2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = std::conj(a[j][i]);
  return r;
}

inline M2 eye() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
inline M2 px() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
inline M2 py() { return {{{0.0, C(0, -1)}, {C(0, 1), 0.0}}}; }
inline M2 pz() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }

inline C trace(const M2& a) { return a[0][0] + a[1][1]; }

/// exp(-i H t) by a truncated Taylor series.
inline M2 expm_taylor(const M2& h, double t, int terms = 20) {
  M2 gen{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gen[i][j] = C(0, -t) * h[i][j];
  M2 sum = eye();
  M2 term = eye();
  for (int k = 1; k <= terms; ++k) {
    term = mul(term, gen);
    for (auto& row : term)
      for (auto& v : row) v /= static_cast<double>(k);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sum[i][j] += term[i][j];
  }
  return sum;
}

inline M2 projector(const Vec2& v) {
  M2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = v[i] * std::conj(v[j]);
  return r;
}

/// Haar-random pure state from a normalised complex Gaussian vector.
template <typename Rng>
Vec2 haar_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec2 v{C(n(rng), n(rng)), C(n(rng), n(rng))};
  const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  return {v[0] / norm, v[1] / norm};
}

/// Haar-random unitary via a random axis and angle times a random phase.
template <typename Rng>
M2 random_unitary(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  double ax = n(rng), ay = n(rng), az = n(rng);
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  ax /= norm;
  ay /= norm;
  az /= norm;
  const M2 h = {{{az, C(ax, -ay)}, {C(ax, ay), -az}}};
  return expm_taylor(h, u(rng), 60);
}

/// Monte Carlo Haar average of |<psi| V^dagger U |psi>|^2.
template <typename Rng>
double haar_average_fidelity(const M2& u, const M2& v, int samples, Rng& rng) {
  const M2 w = mul(dagger(v), u);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec2 psi = haar_state(rng);
    const C amp = std::conj(psi[0]) * (w[0][0] * psi[0] + w[0][1] * psi[1]) +
                  std::conj(psi[1]) * (w[1][0] * psi[0] + w[1][1] * psi[1]);
    acc += std::norm(amp);
  }
  return acc / samples;
}

/// Exact Haar average of |<psi| V^dagger U |psi>|^2 by quadrature over the
/// Bloch sphere: the integrand is quadratic in the Bloch vector, so Simpson in
/// cos(polar) and the trapezoid rule in azimuth are both exact.
inline double haar_average_fidelity_exact(const M2& u, const M2& v) {
  const M2 w = mul(dagger(v), u);
  const int nu = 8, nphi = 16;
  double acc = 0.0;
  for (int i = 0; i <= nu; ++i) {
    const double c = -1.0 + 2.0 * i / nu;
    const double weight = (i == 0 || i == nu) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (int k = 0; k < nphi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / nphi;
      const Vec2 psi = {std::sqrt((1.0 + c) / 2.0), std::polar(std::sqrt((1.0 - c) / 2.0), phi)};
      const C amp = std::conj(psi[0]) * (w[0][0] * psi[0] + w[0][1] * psi[1]) +
                    std::conj(psi[1]) * (w[1][0] * psi[0] + w[1][1] * psi[1]);
      acc += weight * std::norm(amp) / nphi;
    }
  }
  // Simpson weights sum to 3 nu; the measure is uniform in cos(polar).
  return acc / (3.0 * nu);
}

/// Direct spectral-representation noise sum, O(steps * n_freq).
inline std::vector<double> noise_direct(const std::vector<double>& amplitude_sq_df,
                                        const std::vector<double>& freqs,
                                        const std::vector<double>& phases, std::size_t steps,
                                        double horizon) {
  std::vector<double> out(steps, 0.0);
  const double dt = horizon / static_cast<double>(steps);
  for (std::size_t j = 0; j < steps; ++j) {
    const double t = (static_cast<double>(j) + 0.5) * dt;
    double acc = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      acc += std::sqrt(2.0 * amplitude_sq_df[k]) *
             std::cos(2.0 * std::numbers::pi * freqs[k] * t + phases[k]);
    }
    out[j] = acc;
  }
  return out;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

/// Trotterised rotating-frame evolution written straight from the model
/// Hamiltonian H = 2 pi Omega s'(t) (cos(2 pi wq t) X - sin(2 pi wq t) Y) + Delta X,
/// with a Gaussian envelope given in device samples.
struct DeviceModel {
  double wq = 5.0;
  double wd = 5.0;
  double omega = 0.1;
  double detuning = 0.001;
  double delta = 0.0;
  double duration = 320.0;
  double sample_time = 2.0 / 9.0;
  double max_amplitude = 0.5;
  int steps = 2000;

  double envelope(double theta, double t) const {
    const double two_pi = 2.0 * std::numbers::pi;
    const double a = theta / (two_pi * omega * sample_time);
    const double sigma = std::sqrt(two_pi) / (max_amplitude * two_pi * omega * sample_time);
    const double x = t / sample_time - duration / 2.0;
    return a / (std::sqrt(two_pi) * sigma) * std::exp(-x * x / (2.0 * sigma * sigma));
  }

  M2 evolve(double theta, double phi, const std::vector<double>& noise = {}) const {
    const double two_pi = 2.0 * std::numbers::pi;
    const double dt = duration * sample_time / steps;
    M2 u = eye();
    for (int j = 0; j < steps; ++j) {
      const double t = (j + 0.5) * dt;
      double s = envelope(theta, t) * std::cos(two_pi * wd * t + phi);
      if (!noise.empty()) s += delta * noise[static_cast<std::size_t>(j)];
      const double cx = two_pi * omega * s * std::cos(two_pi * wq * t) + detuning;
      const double cy = -two_pi * omega * s * std::sin(two_pi * wq * t);
      M2 h;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) h[r][c] = cx * px()[r][c] + cy * py()[r][c];
      u = mul(expm_taylor(h, dt, 16), u);
    }
    return u;
  }
};

}  // namespace oracle
