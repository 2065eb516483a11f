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

#include "graybox/device.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "graybox/error.hpp"
#include "graybox/parallel.hpp"
#include "graybox/rng.hpp"

namespace graybox {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Matrices of the form [[a, -conj(b)], [b, conj(a)]]. Closed under products
// and real-linear combinations, so also used for theta-derivatives.
struct Quaternion {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  friend Quaternion operator*(const Quaternion& l, const Quaternion& r) {
    return {l.a * r.a - std::conj(l.b) * r.b, l.b * r.a + std::conj(l.a) * r.b};
  }
  friend Quaternion operator+(const Quaternion& l, const Quaternion& r) {
    return {l.a + r.a, l.b + r.b};
  }

  Operator2 to_operator() const { return {a, -std::conj(b), b, std::conj(a)}; }
};

// exp(-i dt (ax sx + ay sy)).
Quaternion step_propagator(double ax, double ay, double dt) {
  const double norm = std::hypot(ax, ay);
  const double angle = norm * dt;
  const double sinc = norm > 0.0 ? std::sin(angle) / norm : dt;
  return {Complex(std::cos(angle), 0.0), Complex(sinc * ay, -sinc * ax)};
}

}  // namespace

void ControlParams::validate() const {
  if (!(theta >= 0.0 && theta <= kTwoPi)) {
    throw ValidationError("ControlParams: theta must lie in [0, 2pi]");
  }
  if (!std::isfinite(phi)) throw ValidationError("ControlParams: phi must be finite");
}

DeviceConfig DeviceConfig::ideal() const {
  DeviceConfig c = *this;
  c.detuning = 0.0;
  c.noise_strength = 0.0;
  return c;
}

void DeviceConfig::validate() const {
  if (trotter_steps < 1) throw ValidationError("DeviceConfig: trotter_steps must be >= 1");
  if (!(duration > 0.0)) throw ValidationError("DeviceConfig: duration must be positive");
  if (!(sample_time > 0.0)) throw ValidationError("DeviceConfig: sample_time must be positive");
  if (!(drive_strength > 0.0)) throw ValidationError("DeviceConfig: drive_strength must be positive");
  if (!(max_amplitude > 0.0)) throw ValidationError("DeviceConfig: max_amplitude must be positive");
  if (!std::isfinite(qubit_frequency) || !std::isfinite(drive_frequency) ||
      !std::isfinite(detuning) || !std::isfinite(noise_strength)) {
    throw ValidationError("DeviceConfig: non-finite parameter");
  }
  psd.validate();
}

double envelope(const DeviceConfig& config, double theta, double t) {
  const double omega_dt = kTwoPi * config.drive_strength * config.sample_time;
  const double amplitude = theta / omega_dt;
  const double sigma = std::sqrt(kTwoPi) / (config.max_amplitude * omega_dt);
  const double x = t / config.sample_time - config.duration / 2.0;
  return amplitude / (std::sqrt(kTwoPi) * sigma) * std::exp(-x * x / (2.0 * sigma * sigma));
}

double signal(const DeviceConfig& config, const ControlParams& params, double t,
              double noise_value) {
  return envelope(config, params.theta, t) *
             std::cos(kTwoPi * config.drive_frequency * t + params.phi) +
         config.noise_strength * noise_value;
}

std::vector<double> IntermediateEnsemble::channel(std::size_t c) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v[c]);
  return out;
}

DeviceSimulator::DeviceSimulator(DeviceConfig config)
    : config_((config.validate(), config)),
      noise_(config_.psd, std::max<std::size_t>(config_.trotter_steps, 2), config_.total_time()) {
  const std::size_t n = config_.trotter_steps;
  const double dt = config_.step_time();
  shape_.resize(n);
  drive_cos_.resize(n);
  drive_sin_.resize(n);
  frame_cos_.resize(n);
  frame_sin_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = (static_cast<double>(j) + 0.5) * dt;
    shape_[j] = envelope(config_, 1.0, t);
    drive_cos_[j] = std::cos(kTwoPi * config_.drive_frequency * t);
    drive_sin_[j] = std::sin(kTwoPi * config_.drive_frequency * t);
    frame_cos_[j] = std::cos(kTwoPi * config_.qubit_frequency * t);
    frame_sin_[j] = std::sin(kTwoPi * config_.qubit_frequency * t);
  }
}

Operator2 DeviceSimulator::evolve(const ControlParams& params,
                                  std::span<const double> noise) const {
  const std::size_t n = config_.trotter_steps;
  if (noise.size() != n) {
    throw ValidationError("evolve: noise trace length " + std::to_string(noise.size()) +
                          " does not match trotter_steps " + std::to_string(n));
  }
  const double dt = config_.step_time();
  const double coupling = kTwoPi * config_.drive_strength;
  const double cos_phi = std::cos(params.phi);
  const double sin_phi = std::sin(params.phi);
  const double delta = config_.noise_strength;
  Quaternion u;
  for (std::size_t j = 0; j < n; ++j) {
    const double carrier = drive_cos_[j] * cos_phi - drive_sin_[j] * sin_phi;
    const double s = params.theta * shape_[j] * carrier + delta * noise[j];
    const double ax = coupling * s * frame_cos_[j] + config_.detuning;
    const double ay = -coupling * s * frame_sin_[j];
    u = step_propagator(ax, ay, dt) * u;
  }
  return u.to_operator();
}

Operator2 DeviceSimulator::evolve_noiseless(const ControlParams& params) const {
  const std::vector<double> silence(config_.trotter_steps, 0.0);
  return evolve(params, silence);
}

DeviceSimulator::Tangent DeviceSimulator::evolve_with_tangent(const ControlParams& params) const {
  const std::size_t n = config_.trotter_steps;
  const double dt = config_.step_time();
  const double coupling = kTwoPi * config_.drive_strength;
  const double cos_phi = std::cos(params.phi);
  const double sin_phi = std::sin(params.phi);
  Quaternion u;
  Quaternion du{Complex(0.0, 0.0), Complex(0.0, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    const double carrier = drive_cos_[j] * cos_phi - drive_sin_[j] * sin_phi;
    // a(theta) = theta * b + (detuning, 0)
    const double bx = coupling * shape_[j] * carrier * frame_cos_[j];
    const double by = -coupling * shape_[j] * carrier * frame_sin_[j];
    const double ax = params.theta * bx + config_.detuning;
    const double ay = params.theta * by;
    const double norm = std::hypot(ax, ay);
    Quaternion step;
    Quaternion dstep;
    if (norm > 0.0) {
      const double angle = norm * dt;
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      const double nx = ax / norm;
      const double ny = ay / norm;
      const double dangle = dt * (nx * bx + ny * by);
      const double dnx = (bx - nx * (nx * bx + ny * by)) / norm;
      const double dny = (by - ny * (nx * bx + ny * by)) / norm;
      step = {Complex(c, 0.0), Complex(s * ny, -s * nx)};
      dstep = {Complex(-s * dangle, 0.0),
               Complex(c * dangle * ny + s * dny, -(c * dangle * nx + s * dnx))};
    } else {
      step = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
      dstep = {Complex(0.0, 0.0), Complex(dt * by, -dt * bx)};
    }
    du = dstep * u + step * du;
    u = step * u;
  }
  return {u.to_operator(), du.to_operator()};
}

IntermediateEnsemble DeviceSimulator::intermediate_ensemble(const ControlParams& params,
                                                            std::size_t trajectories,
                                                            std::uint64_t seed) const {
  params.validate();
  if (trajectories < 1) throw ValidationError("intermediate_ensemble: M must be >= 1");
  IntermediateEnsemble ensemble;
  ensemble.control = params;
  ensemble.values.resize(trajectories);

  if (config_.noise_strength == 0.0) {
    const Expectations deterministic = exact_expectations(evolve_noiseless(params));
    std::fill(ensemble.values.begin(), ensemble.values.end(), deterministic);
    return ensemble;
  }
  parallel_for(trajectories, [&](std::size_t i) {
    Rng rng = make_rng(seed, "trajectory", i);
    std::vector<double> trace(config_.trotter_steps);
    noise_.sample_into(rng, trace);
    ensemble.values[i] = exact_expectations(evolve(params, trace));
  });
  return ensemble;
}

namespace {

constexpr double kTwo32 = 4294967296.0;

// P(+1) = (1 + v) / 2 as a threshold on a 32-bit uniform integer.
std::vector<std::uint64_t> plus_thresholds(std::span<const double> hidden) {
  std::vector<std::uint64_t> out(hidden.size());
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const double v = std::clamp(hidden[i], -1.0, 1.0);
    out[i] = static_cast<std::uint64_t>(std::ceil(0.5 * (1.0 + v) * kTwo32));
  }
  return out;
}

// One engine output per shot: the high half selects the hidden value
// (Lemire's unbiased multiply-shift with rejection), the low half is the
// uniform variate of the Bernoulli draw.
double draw_estimate(Rng& rng, std::span<const std::uint64_t> thresholds, std::size_t n_shots) {
  const auto m = static_cast<std::uint64_t>(thresholds.size());
  const std::uint64_t reject_below = ((std::uint64_t{1} << 32) - m) % m;
  std::size_t plus = 0;
  for (std::size_t i = 0; i < n_shots; ++i) {
    std::uint64_t word = rng();
    std::uint64_t product = (word >> 32) * m;
    while ((product & 0xffffffffULL) < reject_below) {
      word = rng();
      product = (word >> 32) * m;
    }
    if ((word & 0xffffffffULL) < thresholds[product >> 32]) ++plus;
  }
  const double n = static_cast<double>(n_shots);
  return (2.0 * static_cast<double>(plus) - n) / n;
}

void check_hidden(std::span<const double> hidden, std::size_t n_shots) {
  if (hidden.empty()) throw ValidationError("finite_shot_sample: empty ensemble");
  if (hidden.size() > (std::size_t{1} << 32)) {
    throw ValidationError("finite_shot_sample: ensemble larger than 2^32 values");
  }
  if (n_shots < 1) throw ValidationError("finite_shot_sample: n_shots must be >= 1");
  // Exact expectations may overshoot +-1 by a few ulps; anything larger is a bug.
  constexpr double kSlack = 1e-12;
  for (double v : hidden) {
    if (!(v >= -1.0 - kSlack && v <= 1.0 + kSlack)) {
      throw ValidationError("finite_shot_sample: intermediate value outside [-1, 1]");
    }
  }
}

}  // namespace

std::vector<double> resample_finite_shot(std::span<const double> hidden, std::size_t n_shots,
                                         std::size_t n_repeats, std::uint64_t seed) {
  check_hidden(hidden, n_shots);
  const auto thresholds = plus_thresholds(hidden);
  std::vector<double> out(n_repeats);
  parallel_for(n_repeats, [&](std::size_t r) {
    Rng rng = make_rng(seed, "finite-shot", r);
    out[r] = draw_estimate(rng, thresholds, n_shots);
  });
  return out;
}

PredictiveDistribution finite_shot_sample(const IntermediateEnsemble& ensemble,
                                          std::size_t n_shots, std::size_t n_repeats,
                                          std::uint64_t seed) {
  std::vector<std::vector<std::uint64_t>> columns;
  columns.reserve(kChannelCount);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto hidden = ensemble.channel(c);
    check_hidden(hidden, n_shots);
    columns.push_back(plus_thresholds(hidden));
  }
  PredictiveDistribution dist;
  dist.source = PredictiveDistribution::Source::Device;
  dist.samples.resize(n_repeats);
  parallel_for(n_repeats, [&](std::size_t r) {
    Rng rng = make_rng(seed, "finite-shot", r);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      dist.samples[r][c] = draw_estimate(rng, columns[c], n_shots);
    }
  });
  return dist;
}

std::vector<double> PredictiveDistribution::channel(std::size_t c) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s[c]);
  return out;
}

Expectations PredictiveDistribution::mean() const {
  Expectations m{};
  if (samples.empty()) return m;
  for (const auto& s : samples) {
    for (std::size_t c = 0; c < kChannelCount; ++c) m[c] += s[c];
  }
  for (auto& v : m) v /= static_cast<double>(samples.size());
  return m;
}

std::string_view to_string(PredictiveDistribution::Source source) {
  switch (source) {
    case PredictiveDistribution::Source::Device: return "device";
    case PredictiveDistribution::Source::SgmResample: return "sgm-resample";
    case PredictiveDistribution::Source::PgmPosterior: return "pgm-posterior";
  }
  return "unknown";
}

}  // namespace graybox
