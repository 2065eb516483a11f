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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "graybox/device.hpp"
#include "graybox/tomography.hpp"

namespace graybox {

/// One dataset row: control value and 18 finite-shot expectation values.
struct ExperimentRecord {
  double theta = 0.0;
  std::size_t n_shots = 0;
  Expectations exps{};

  /// Range and 2/n lattice checks.
  void validate() const;
};

struct DatasetSplit {
  std::vector<ExperimentRecord> train;
  std::vector<ExperimentRecord> test;
  std::uint64_t seed = 0;
};

/// One record at a fixed control value: an M-trajectory ensemble followed by a
/// single finite-shot draw.
ExperimentRecord generate_record(const DeviceSimulator& device, double theta,
                                 std::size_t n_shots, std::size_t trajectories,
                                 std::uint64_t seed);

/// m records with theta ~ U(0, 2pi). Record i derives its ensemble and shot
/// streams from (seed, i).
std::vector<ExperimentRecord> generate_dataset(const DeviceSimulator& device, std::size_t m,
                                               std::size_t n_shots, std::size_t trajectories,
                                               std::uint64_t seed);

/// Shuffles by seed; the first floor(train_frac * m) records form the train set.
DatasetSplit split(const std::vector<ExperimentRecord>& records, double train_frac,
                   std::uint64_t seed);

/// CSV: header `theta,n_shots,exp_X_Xp,...,exp_Z_Zm`, values with 17 significant digits.
std::string dataset_header();
void write_dataset(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::string dataset_to_string(const std::vector<ExperimentRecord>& records);
/// Parses and validates every row. Errors name the 1-based data row.
std::vector<ExperimentRecord> read_dataset(std::istream& in);
std::vector<ExperimentRecord> parse_dataset(const std::string& text);

void save_dataset(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> load_dataset(const std::filesystem::path& path);

/// "%.17g" formatting shared by all CSV writers.
std::string format_double(double value);

}  // namespace graybox
