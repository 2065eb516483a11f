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

#include "graybox/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "graybox/error.hpp"
#include "graybox/rng.hpp"

namespace graybox {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void ExperimentRecord::validate() const {
  if (!(theta >= 0.0 && theta <= 2.0 * std::numbers::pi)) {
    throw ValidationError("record theta outside [0, 2pi]");
  }
  if (n_shots < 1) throw ValidationError("record n_shots must be >= 1");
  const double n = static_cast<double>(n_shots);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const double v = exps[c];
    if (!(v >= -1.0 && v <= 1.0)) {
      throw ValidationError("record value " + channel_name(c) + " outside [-1, 1]");
    }
    const double steps = (v + 1.0) * n / 2.0;
    if (std::abs(steps - std::round(steps)) > 1e-6) {
      throw ValidationError("record value " + channel_name(c) + " is not on the 2/n_shots lattice");
    }
  }
}

ExperimentRecord generate_record(const DeviceSimulator& device, double theta,
                                 std::size_t n_shots, std::size_t trajectories,
                                 std::uint64_t seed) {
  const ControlParams params{theta, 0.0};
  const IntermediateEnsemble ensemble =
      device.intermediate_ensemble(params, trajectories, derive_seed(seed, "ensemble", 0));
  const PredictiveDistribution shots =
      finite_shot_sample(ensemble, n_shots, 1, derive_seed(seed, "shots", 0));
  ExperimentRecord record;
  record.theta = theta;
  record.n_shots = n_shots;
  record.exps = shots.samples.front();
  return record;
}

std::vector<ExperimentRecord> generate_dataset(const DeviceSimulator& device, std::size_t m,
                                               std::size_t n_shots, std::size_t trajectories,
                                               std::uint64_t seed) {
  if (m < 1) throw ValidationError("generate_dataset: m must be >= 1");
  Rng theta_rng = make_rng(seed, "theta", 0);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<ExperimentRecord> records(m);
  for (std::size_t i = 0; i < m; ++i) {
    records[i] =
        generate_record(device, uniform(theta_rng), n_shots, trajectories,
                        derive_seed(seed, "record", i));
  }
  return records;
}

DatasetSplit split(const std::vector<ExperimentRecord>& records, double train_frac,
                   std::uint64_t seed) {
  if (records.empty()) throw ValidationError("split: no records");
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw ValidationError("split: train_frac must lie in (0, 1)");
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(seed, "split", 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train =
      static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(records.size())));
  DatasetSplit out;
  out.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.train : out.test).push_back(records[order[i]]);
  }
  return out;
}

std::string dataset_header() {
  std::string header = "theta,n_shots";
  for (std::size_t c = 0; c < kChannelCount; ++c) header += ",exp_" + channel_name(c);
  return header;
}

void write_dataset(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << dataset_header() << '\n';
  for (const auto& r : records) {
    out << format_double(r.theta) << ',' << r.n_shots;
    for (double v : r.exps) out << ',' << format_double(v);
    out << '\n';
  }
}

std::string dataset_to_string(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  write_dataset(out, records);
  return out.str();
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t row, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto result = std::from_chars(field.data(), end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ValidationError("dataset row " + std::to_string(row) + ": cannot parse " + what +
                          " from '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<ExperimentRecord> read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != dataset_header()) throw ValidationError("dataset: unexpected header");

  std::vector<ExperimentRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 2 + kChannelCount) {
      throw ValidationError("dataset row " + std::to_string(row) + ": expected " +
                            std::to_string(2 + kChannelCount) + " fields, got " +
                            std::to_string(fields.size()));
    }
    ExperimentRecord r;
    r.theta = parse_field<double>(fields[0], row, "theta");
    r.n_shots = parse_field<std::size_t>(fields[1], row, "n_shots");
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      r.exps[c] = parse_field<double>(fields[2 + c], row, "expectation");
    }
    try {
      r.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("dataset row " + std::to_string(row) + ": " + e.what());
    }
    records.push_back(r);
  }
  return records;
}

std::vector<ExperimentRecord> parse_dataset(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

void save_dataset(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_dataset(out, records);
}

std::vector<ExperimentRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read dataset " + path.string());
  return read_dataset(in);
}

}  // namespace graybox
