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

#include "graybox/calibrate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "graybox/dataset.hpp"
#include "graybox/error.hpp"
#include "graybox/rng.hpp"
#include "graybox/sgm.hpp"

namespace graybox {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kProbFloor = 1e-6;

// Post-states as tape nodes depending on theta through the whitebox jet.
std::array<Mat2<ad::Var>, 6> post_on_tape(ad::Tape& tape, const ad::Var& theta,
                                          const WhiteboxJet& jet) {
  std::array<Mat2<ad::Var>, 6> out;
  for (std::size_t s = 0; s < 6; ++s) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const auto& v = jet.entry.post_states[s](r, c);
        const auto& d = jet.derivatives[s](r, c);
        out[s](r, c) = {tape.unary(theta, v.re, d.re), tape.unary(theta, v.im, d.im)};
      }
    }
  }
  return out;
}

template <typename F>
double theta_objective(std::span<const double> weights, const WhiteboxJet& jet, F&& objective,
                       double* derivative) {
  ad::Tape tape;
  const ad::Var theta = tape.variable(jet.entry.theta);
  const std::vector<ad::Var> w(weights.begin(), weights.end());
  const auto post = post_on_tape(tape, theta, jet);
  const auto y = graybox_expectations<ad::Var>(std::span<const ad::Var>(w), theta, post);
  const ad::Var out = objective(y);
  if (!std::isfinite(out.value())) {
    throw NumericError("calibration: non-finite objective", {jet.entry.theta});
  }
  if (derivative != nullptr) *derivative = tape.gradient(out, std::span<const ad::Var>(&theta, 1))[0];
  return out.value();
}

template <typename F>
CalibrationResult descend(const std::string& model, const WhiteboxCache& cache,
                          const CalibrationConfig& config, F&& objective) {
  config.validate();
  CalibrationResult result;
  result.model = model;
  result.gradient_method = to_string(config.gradient);
  result.trace.reserve(config.iterations);
  AdamW opt(config.optimizer, 1);
  double theta = reflect_control(config.theta0);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const WhiteboxJet jet = cache.jet(theta, config.gradient, config.fd_step);
    double grad = 0.0;
    const double value = objective(jet, &grad);
    result.trace.push_back({theta, value});
    double p[1] = {theta};
    const double g[1] = {grad};
    opt.step(p, g);
    theta = reflect_control(p[0]);
  }
  result.theta_star = theta;
  return result;
}

}  // namespace

CalibrationConfig CalibrationConfig::sgm_defaults() { return CalibrationConfig{}; }

CalibrationConfig CalibrationConfig::pgm_defaults() {
  CalibrationConfig c;
  c.iterations = 1500;
  c.optimizer.schedule.warmup_steps = 800;
  c.optimizer.schedule.decay_steps = 8000;
  return c;
}

void CalibrationConfig::validate() const {
  if (iterations < 1) throw ValidationError("calibration: iterations must be >= 1");
  if (!(theta0 >= 0.0 && theta0 <= kTwoPi)) throw ValidationError("calibration: theta0 outside [0, 2 pi]");
  if (n_shots < 1) throw ValidationError("calibration: n_shots must be >= 1");
  if (!(fd_step > 0.0)) throw ValidationError("calibration: fd_step must be positive");
  optimizer.validate();
}

double reflect_control(double theta) {
  if (!std::isfinite(theta)) throw NumericError("calibration: non-finite control", {theta});
  theta = std::fmod(theta, 2.0 * kTwoPi);
  if (theta < 0.0) theta += 2.0 * kTwoPi;
  return theta > kTwoPi ? 2.0 * kTwoPi - theta : theta;
}

double sgm_calibration_objective(const BlackboxParams& params, const WhiteboxJet& jet,
                                 const PauliTransferMatrix& target, double* derivative) {
  return theta_objective(params.values(), jet,
                         [&](const std::array<ad::Var, kChannelCount>& y) {
                           const ad::Var agf = average_gate_fidelity_from(y, target);
                           return ad::square(1.0 - agf);
                         },
                         derivative);
}

double pgm_calibration_objective(const VariationalParams& q, const WhiteboxJet& jet,
                                 const Expectations& target_values, std::size_t n_shots,
                                 double* derivative) {
  return theta_objective(q.mean(), jet,
                         [&](const std::array<ad::Var, kChannelCount>& y) {
                           ad::Var nll = 0.0;
                           for (std::size_t c = 0; c < kChannelCount; ++c) {
                             const std::size_t k = shot_count(target_values[c], n_shots);
                             const ad::Var p = ad::clamp((y[c] + 1.0) * 0.5, kProbFloor, 1.0 - kProbFloor);
                             const double kk = static_cast<double>(k);
                             const double nk = static_cast<double>(n_shots - k);
                             nll = nll - (log_binomial_coefficient(k, n_shots) + kk * ad::log(p) +
                                          nk * ad::log(1.0 - p));
                           }
                           return nll;
                         },
                         derivative);
}

CalibrationResult calibrate_sgm(const BlackboxParams& params, const WhiteboxCache& cache,
                                const Operator2& target, const CalibrationConfig& config) {
  if (!target.is_unitary()) throw ValidationError("calibrate_sgm: target is not unitary");
  const PauliTransferMatrix target_ptm = ptm_of_unitary(target);
  return descend("sgm", cache, config, [&](const WhiteboxJet& jet, double* d) {
    return sgm_calibration_objective(params, jet, target_ptm, d);
  });
}

CalibrationResult calibrate_pgm(const VariationalParams& q, const WhiteboxCache& cache,
                                const Operator2& target, const CalibrationConfig& config) {
  if (!target.is_unitary()) throw ValidationError("calibrate_pgm: target is not unitary");
  const Expectations target_values = exact_expectations(target);
  return descend("pgm", cache, config, [&](const WhiteboxJet& jet, double* d) {
    return pgm_calibration_objective(q, jet, target_values, config.n_shots, d);
  });
}

CalibrationEvaluation evaluate_calibration(double theta, const DeviceSimulator& device,
                                           WhiteboxCache& cache, const BlackboxParams& sgm,
                                           const VariationalParams& pgm, const Operator2& target,
                                           const EvaluationConfig& config, std::uint64_t seed) {
  CalibrationEvaluation ev;
  ev.theta = theta;
  const auto ensemble =
      device.intermediate_ensemble({theta, 0.0}, config.trajectories, derive_seed(seed, "eval-ensemble", 0));
  const auto dev = finite_shot_sample(ensemble, config.n_shots, config.n_repeats,
                                     derive_seed(seed, "eval-shots", 0));
  const auto sgm_dist =
      sgm_uncertainty(sgm, theta, cache, config.n_shots, config.n_repeats, derive_seed(seed, "eval-sgm", 0));
  const auto pgm_dist = pgm_posterior_predictive(pgm, theta, cache, config.n_shots, config.n_repeats,
                                                 derive_seed(seed, "eval-pgm", 0));
  ev.agf_device = agf_distribution(dev, target);
  ev.agf_sgm = agf_distribution(sgm_dist, target);
  ev.agf_pgm = agf_distribution(pgm_dist, target);
  auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
  };
  ev.mean_agf_device = mean(ev.agf_device);
  ev.mean_agf_sgm = mean(ev.agf_sgm);
  ev.mean_agf_pgm = mean(ev.agf_pgm);
  ev.jsd_sgm = jsd(ev.agf_sgm, ev.agf_device, 0.0, 1.0);
  ev.jsd_pgm = jsd(ev.agf_pgm, ev.agf_device, 0.0, 1.0);
  // 0/0 stays undefined: identical histograms say nothing about the ordering.
  if (ev.jsd_pgm > 0.0) {
    ev.ratio = ev.jsd_sgm / ev.jsd_pgm;
  } else {
    ev.ratio = ev.jsd_sgm > 0.0 ? std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::quiet_NaN();
  }
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto d = dev.channel(c);
    ev.channel_jsd_sgm[c] = jsd(sgm_dist.channel(c), d, -1.0, 1.0);
    ev.channel_jsd_pgm[c] = jsd(pgm_dist.channel(c), d, -1.0, 1.0);
  }
  return ev;
}

void write_calibration_table(std::ostream& out,
                             const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows) {
  out << "model,theta_star,agf_device,agf_sgm,agf_pgm,jsd_sgm,jsd_pgm,ratio\n";
  for (const auto& [model, ev] : rows) {
    out << model << ',' << format_double(ev.theta) << ',' << format_double(ev.mean_agf_device) << ','
        << format_double(ev.mean_agf_sgm) << ',' << format_double(ev.mean_agf_pgm) << ','
        << format_double(ev.jsd_sgm) << ',' << format_double(ev.jsd_pgm) << ','
        << format_double(ev.ratio) << '\n';
  }
}

void write_channel_jsd(std::ostream& out,
                       const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows) {
  out << "model,channel,jsd_sgm,jsd_pgm\n";
  for (const auto& [model, ev] : rows) {
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      out << model << ',' << channel_name(c) << ',' << format_double(ev.channel_jsd_sgm[c]) << ','
          << format_double(ev.channel_jsd_pgm[c]) << '\n';
    }
  }
}

void write_evaluation_samples(std::ostream& out,
                              const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows) {
  out << "model,backend,index,agf\n";
  for (const auto& [model, ev] : rows) {
    const std::pair<const char*, const std::vector<double>*> backends[] = {
        {"device", &ev.agf_device}, {"sgm", &ev.agf_sgm}, {"pgm", &ev.agf_pgm}};
    for (const auto& [name, samples] : backends) {
      for (std::size_t i = 0; i < samples->size(); ++i) {
        out << model << ',' << name << ',' << i << ',' << format_double((*samples)[i]) << '\n';
      }
    }
  }
}

void write_calibration_trace(std::ostream& out, const CalibrationResult& result) {
  out << "iteration,theta,objective\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    out << i << ',' << format_double(result.trace[i].theta) << ','
        << format_double(result.trace[i].objective) << '\n';
  }
}

}  // namespace graybox
