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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

#include "graybox/dataset.hpp"
#include "graybox/error.hpp"

namespace {

using namespace graybox;

DeviceSimulator small_device() {
  DeviceConfig c;
  c.trotter_steps = 400;
  return DeviceSimulator(c);
}

void expect_on_lattice(const ExperimentRecord& r) {
  for (double v : r.exps) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
    const double k = (v + 1.0) * static_cast<double>(r.n_shots) / 2.0;
    EXPECT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(Dataset, HeaderNamesAllChannels) {
  const std::string h = dataset_header();
  EXPECT_EQ(h.rfind("theta,n_shots,exp_X_Xp,exp_X_Xm,", 0), 0u);
  EXPECT_NE(h.find("exp_Y_Yp"), std::string::npos);
  EXPECT_EQ(h.substr(h.size() - 8), "exp_Z_Zm");
  EXPECT_EQ(std::count(h.begin(), h.end(), ','), 19);
}

TEST(Dataset, RecordsLieOnShotLattice) {
  const auto device = small_device();
  const auto records = generate_dataset(device, 6, 50, 4, 99);
  ASSERT_EQ(records.size(), 6u);
  for (const auto& r : records) {
    EXPECT_GE(r.theta, 0.0);
    EXPECT_LE(r.theta, 2.0 * std::numbers::pi);
    EXPECT_EQ(r.n_shots, 50u);
    expect_on_lattice(r);
  }
  const auto again = generate_dataset(device, 6, 50, 4, 99);
  EXPECT_EQ(dataset_to_string(records), dataset_to_string(again));
  EXPECT_NE(dataset_to_string(records), dataset_to_string(generate_dataset(device, 6, 50, 4, 100)));
}

TEST(Dataset, RecordValidation) {
  ExperimentRecord r;
  r.n_shots = 10;
  r.exps.fill(0.2);
  EXPECT_NO_THROW(r.validate());
  r.exps[4] = 0.25;
  EXPECT_THROW(r.validate(), ValidationError);
  r.exps[4] = 1.2;
  EXPECT_THROW(r.validate(), ValidationError);
  r.exps[4] = 0.2;
  r.theta = 7.0;
  EXPECT_THROW(r.validate(), ValidationError);
}

TEST(Dataset, SplitSizesAndPartition) {
  const auto records = generate_dataset(small_device(), 23, 20, 2, 5);
  const auto s = split(records, 0.9, 42);
  EXPECT_EQ(s.train.size(), 20u);
  EXPECT_EQ(s.test.size(), 3u);
  std::multiset<double> all, parts;
  for (const auto& r : records) all.insert(r.theta);
  for (const auto& r : s.train) parts.insert(r.theta);
  for (const auto& r : s.test) parts.insert(r.theta);
  EXPECT_EQ(all, parts);
  const auto t = split(records, 0.9, 42);
  EXPECT_EQ(dataset_to_string(s.train), dataset_to_string(t.train));
  EXPECT_THROW(split(records, 1.0, 1), ValidationError);
  EXPECT_THROW(split({}, 0.5, 1), ValidationError);
}

TEST(Dataset, CsvRoundTripIsExact) {
  const auto records = generate_dataset(small_device(), 4, 30, 2, 12);
  const std::string text = dataset_to_string(records);
  const auto back = parse_dataset(text);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].theta, records[i].theta);
    EXPECT_EQ(back[i].n_shots, records[i].n_shots);
    EXPECT_EQ(back[i].exps, records[i].exps);
  }
  EXPECT_EQ(dataset_to_string(back), text);

  const auto path = std::filesystem::temp_directory_path() / "graybox_dataset_roundtrip.csv";
  save_dataset(path, records);
  EXPECT_EQ(dataset_to_string(load_dataset(path)), text);
  std::filesystem::remove(path);
}

std::string row(const std::string& theta, const std::string& n, const std::string& value) {
  std::string out = theta + "," + n;
  for (int c = 0; c < 18; ++c) out += "," + value;
  return out;
}

void expect_row_error(const std::string& body, const std::string& fragment) {
  try {
    parse_dataset(dataset_header() + "\n" + row("1.0", "10", "0.2") + "\n" + body + "\n");
    FAIL() << "accepted: " << body;
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Dataset, MalformedRowsNameTheRow) {
  expect_row_error("1.0,10,0.2", "row 2");
  expect_row_error(row("abc", "10", "0.2"), "row 2");
  expect_row_error(row("1.0", "10", "0.25"), "row 2");
  expect_row_error(row("9.0", "10", "0.2"), "row 2");
  expect_row_error(row("1.0", "-3", "0.2"), "row 2");
  EXPECT_THROW(parse_dataset("theta,foo\n"), ValidationError);
  EXPECT_THROW(parse_dataset(""), ValidationError);
  EXPECT_THROW(load_dataset("/nonexistent/graybox.csv"), ConfigError);
}

TEST(Dataset, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, std::numbers::pi, -0.998, 1e-300}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
