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
#include <iosfwd>
#include <span>
#include <vector>

#include "graybox/device.hpp"
#include "graybox/pgm.hpp"
#include "graybox/predictive.hpp"
#include "graybox/whitebox.hpp"

namespace graybox {

/// Uniform-bin histogram over [lo, hi]. Values outside the support land in
/// the edge bins and are counted in `clamped`.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  std::size_t clamped = 0;

  static Histogram build(std::span<const double> samples, double lo, double hi, std::size_t bins);
  std::vector<double> edges() const;
  std::vector<double> probabilities() const;
};

inline constexpr std::size_t kDefaultBins = 100;

/// Jensen-Shannon divergence in nats between two binned probability vectors.
double jsd(std::span<const double> p, std::span<const double> q);
/// Binned JSD of two sample sets on a shared uniform grid.
double jsd(std::span<const double> a, std::span<const double> b, double lo, double hi,
           std::size_t bins = kDefaultBins);

/// Linear-interpolation quantile (the usual "type 7" definition).
double quantile(std::span<const double> samples, double q);

/// AGF of every 18-vector sample against `target`.
std::vector<double> agf_distribution(const PredictiveDistribution& dist, const Operator2& target);

std::vector<double> linspace(double lo, double hi, std::size_t count);

struct SweepConfig {
  double lo = 1.3;
  double hi = 1.7;
  std::size_t count = 21;
  std::size_t n_shots = 1000;
  std::size_t n_repeats = 1000;
  std::size_t trajectories = 100;

  void validate() const;
};

struct SweepPoint {
  double theta = 0.0;
  std::vector<double> agf_device;
  std::vector<double> agf_sgm;
  std::vector<double> agf_pgm;
  double jsd_sgm = 0.0;
  double jsd_pgm = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;

  double mean_jsd_sgm() const;
  double mean_jsd_pgm() const;
};

/// Device, SGM-resample and PGM-posterior AGF distributions over a theta grid,
/// with JSD of each model against the device. Grid point i draws from
/// derive_seed(seed, "sweep", i).
SweepResult sweep(const DeviceSimulator& device, WhiteboxCache& cache, const BlackboxParams& sgm,
                  const VariationalParams& pgm, const Operator2& target, const SweepConfig& config,
                  std::uint64_t seed);

/// theta,backend,agf_q05,agf_q50,agf_q95,jsd_sgm,jsd_pgm (one row per backend).
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// theta,backend,index,agf (every raw sample).
void write_sweep_samples(std::ostream& out, const SweepResult& result);

}  // namespace graybox
