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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graybox/calibrate.hpp"
#include "graybox/device.hpp"
#include "graybox/metrics.hpp"
#include "graybox/pgm.hpp"
#include "graybox/sgm.hpp"

namespace graybox {

struct DatasetConfig {
  std::size_t m = 1000;
  std::size_t n_shots = 1000;
  std::size_t trajectories = 100;
  double train_frac = 0.9;
  std::optional<std::uint64_t> split_seed;  // derived from the master seed when absent
};

struct VerifyConfig {
  double mu0 = 0.5;
  std::size_t n_shots = 10000;
  std::size_t repeats = 100000;
  std::size_t ensemble_size = 1000;
  std::vector<double> sigmas = {0.0, 0.05, 0.1};
  double mean_tolerance_se = 5.0;
  double variance_tolerance = 0.05;
};

/// Everything one pipeline run depends on. Defaults reproduce the reference
/// experiment; every field is reachable from JSON and from `--set`.
struct RunConfig {
  std::uint64_t master_seed = 20240917;
  DeviceConfig device;  // device.psd is serialised under "noise"
  DatasetConfig dataset;
  SgmConfig sgm;
  PgmConfig pgm;
  CalibrationConfig calibrate_sgm = CalibrationConfig::sgm_defaults();
  CalibrationConfig calibrate_pgm = CalibrationConfig::pgm_defaults();
  SweepConfig sweep;
  EvaluationConfig evaluation;
  VerifyConfig verify;
  std::string output_dir = "runs/default";

  void validate() const;
  /// Seed for one pipeline purpose ("dataset", "sgm", ...).
  std::uint64_t seed_for(const std::string& purpose) const;
  std::uint64_t split_seed() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Strict parse: unknown keys and ill-typed values raise ConfigError.
RunConfig config_from_json(const nlohmann::json& doc);

/// Applies "a.b.c=value" to a config document. The value is parsed as JSON
/// when possible and kept as a string otherwise; the path must already exist.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads the file (or the defaults when `path` is empty), applies overrides
/// in order, parses and validates.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides);

}  // namespace graybox
