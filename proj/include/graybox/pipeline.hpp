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

#include "graybox/config.hpp"

namespace graybox {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2, kExitVerify = 3 };

struct Artifact {
  std::string name;
  std::string hash;
};

struct CommandRequest {
  std::string command;                   // gen-data, train, sweep, calibrate, eval, verify-estimator
  std::optional<std::string> model;      // sgm | pgm for train and calibrate
  std::optional<std::filesystem::path> input_dir;  // defaults to the output directory
};

struct CommandResult {
  int exit_code = kExitOk;
  std::filesystem::path manifest;
  std::vector<Artifact> outputs;
  std::string summary;
};

/// Runs one command, writing its artifacts and a manifest into `output_dir`.
/// Throws ConfigError for bad requests or missing inputs; other exceptions are
/// runtime failures.
CommandResult run_command(const CommandRequest& request, const RunConfig& config,
                          const std::filesystem::path& output_dir);

struct RerunReport {
  CommandResult result;
  std::vector<std::pair<std::string, bool>> identical;  // per recorded output
  bool all_identical = true;
};

/// Replays a manifest (same command, config and inputs) into `output_dir` and
/// compares every output against the recorded hash.
RerunReport rerun_from_manifest(const std::filesystem::path& manifest,
                                const std::filesystem::path& output_dir);

/// Precedence: explicit flag, then GRAYBOX_OUTPUT_DIR, then the config.
std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::filesystem::path>& flag);

/// "fnv1a64:<16 hex digits>" of the file bytes.
std::string file_hash(const std::filesystem::path& path);

std::string manifest_name(const CommandRequest& request);

struct EstimatorCheck {
  double sigma0 = 0.0;
  double mu0 = 0.0;
  double hidden_mean = 0.0;
  double hidden_sd = 0.0;
  double empirical_mean = 0.0;
  double mean_se = 0.0;
  double mean_z = 0.0;
  double expected_variance = 0.0;
  double empirical_variance = 0.0;
  double variance_rel_error = 0.0;
  bool mean_ok = false;
  bool variance_ok = false;
};

/// Monte Carlo check of the finite-shot estimator: for each hidden spread
/// sigma0 a synthetic hidden ensemble with mean mu0 is resampled `repeats`
/// times; the mean must match mu0 and the variance (1 - mu0^2) / n.
std::vector<EstimatorCheck> verify_estimator(const VerifyConfig& config, std::uint64_t seed);

}  // namespace graybox
