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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graybox/metrics.hpp"
#include "graybox/optimizer.hpp"
#include "graybox/pgm.hpp"
#include "graybox/whitebox.hpp"

namespace graybox {

struct CalibrationConfig {
  std::size_t iterations = 1000;
  double theta0 = 1.0;
  std::size_t n_shots = 1000;  // target counts for the likelihood objective
  WhiteboxGradient gradient = WhiteboxGradient::CentralDifference;
  double fd_step = 1e-4;
  AdamWConfig optimizer{.schedule = {.warmup_steps = 100, .decay_steps = 1000}};

  static CalibrationConfig sgm_defaults();
  static CalibrationConfig pgm_defaults();
  void validate() const;
};

struct CalibrationStep {
  double theta = 0.0;
  double objective = 0.0;
};

struct CalibrationResult {
  std::string model;
  double theta_star = 0.0;
  std::vector<CalibrationStep> trace;  // objective evaluated at the theta of each iteration
  std::string gradient_method;
};

/// Folds theta back into [0, 2 pi] by reflection at the ends.
double reflect_control(double theta);

/// (1 - AGF)^2 of the intermediate SGM prediction and its theta-derivative.
double sgm_calibration_objective(const BlackboxParams& params, const WhiteboxJet& jet,
                                 const PauliTransferMatrix& target, double* derivative);

/// Negative log-likelihood of the ideal target counts under the posterior-mean
/// PGM prediction, and its theta-derivative.
double pgm_calibration_objective(const VariationalParams& q, const WhiteboxJet& jet,
                                 const Expectations& target_values, std::size_t n_shots,
                                 double* derivative);

/// AdamW descent on theta of the SGM objective.
CalibrationResult calibrate_sgm(const BlackboxParams& params, const WhiteboxCache& cache,
                                const Operator2& target, const CalibrationConfig& config);

/// AdamW descent on theta of the PGM negative log-likelihood.
CalibrationResult calibrate_pgm(const VariationalParams& q, const WhiteboxCache& cache,
                                const Operator2& target, const CalibrationConfig& config);

struct EvaluationConfig {
  std::size_t n_shots = 1000;
  std::size_t n_repeats = 1000;
  std::size_t trajectories = 100;
};

struct CalibrationEvaluation {
  double theta = 0.0;
  std::vector<double> agf_device;
  std::vector<double> agf_sgm;
  std::vector<double> agf_pgm;
  double mean_agf_device = 0.0;
  double mean_agf_sgm = 0.0;
  double mean_agf_pgm = 0.0;
  double jsd_sgm = 0.0;  // D(SGM || device) on AGF samples
  double jsd_pgm = 0.0;
  double ratio = 0.0;    // jsd_sgm / jsd_pgm; NaN when both vanish
  std::array<double, kChannelCount> channel_jsd_sgm{};
  std::array<double, kChannelCount> channel_jsd_pgm{};
};

/// Device, SGM and PGM distributions at one control value, compared to the device.
CalibrationEvaluation evaluate_calibration(double theta, const DeviceSimulator& device,
                                           WhiteboxCache& cache, const BlackboxParams& sgm,
                                           const VariationalParams& pgm, const Operator2& target,
                                           const EvaluationConfig& config, std::uint64_t seed);

/// model,theta_star,agf_device,agf_sgm,agf_pgm,jsd_sgm,jsd_pgm,ratio
void write_calibration_table(std::ostream& out,
                             const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows);
/// model,channel,jsd_sgm,jsd_pgm
void write_channel_jsd(std::ostream& out,
                       const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows);
/// model,backend,index,agf
void write_evaluation_samples(std::ostream& out,
                              const std::vector<std::pair<std::string, CalibrationEvaluation>>& rows);
/// iteration,theta,objective
void write_calibration_trace(std::ostream& out, const CalibrationResult& result);

}  // namespace graybox
