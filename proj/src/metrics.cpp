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

#include "graybox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "graybox/dataset.hpp"
#include "graybox/error.hpp"
#include "graybox/parallel.hpp"
#include "graybox/rng.hpp"
#include "graybox/sgm.hpp"

namespace graybox {

Histogram Histogram::build(std::span<const double> samples, double lo, double hi,
                           std::size_t bins) {
  if (samples.empty()) throw ValidationError("histogram: empty sample set");
  if (bins < 1) throw ValidationError("histogram: need at least one bin");
  if (!(hi > lo)) throw ValidationError("histogram: support must satisfy lo < hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : samples) {
    if (std::isnan(x)) throw ValidationError("histogram: NaN sample");
    std::size_t b = 0;
    if (x < lo) {
      ++h.clamped;
    } else if (x >= hi) {
      b = bins - 1;
      if (x > hi) ++h.clamped;
    } else {
      b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
    }
    ++h.counts[b];
  }
  h.total = samples.size();
  return h;
}

std::vector<double> Histogram::edges() const {
  return linspace(lo, hi, counts.size() + 1);
}

std::vector<double> Histogram::probabilities() const {
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return p;
}

double jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) throw ValidationError("jsd: mismatched bins");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    // Summed symmetrically so that jsd(p, q) == jsd(q, p) bit for bit.
    const double a = p[i] > 0.0 ? p[i] * std::log(p[i] / m) : 0.0;
    const double b = q[i] > 0.0 ? q[i] * std::log(q[i] / m) : 0.0;
    acc += 0.5 * (a + b);
  }
  return std::clamp(acc, 0.0, std::log(2.0));
}

double jsd(std::span<const double> a, std::span<const double> b, double lo, double hi,
           std::size_t bins) {
  if (a.empty() || b.empty()) throw ValidationError("jsd: empty sample set");
  const auto p = Histogram::build(a, lo, hi, bins).probabilities();
  const auto q = Histogram::build(b, lo, hi, bins).probabilities();
  return jsd(p, q);
}

double quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw ValidationError("quantile: empty sample set");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile: q outside [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<double> agf_distribution(const PredictiveDistribution& dist, const Operator2& target) {
  if (!target.is_unitary()) throw ValidationError("agf_distribution: target is not unitary");
  const PauliTransferMatrix target_ptm = ptm_of_unitary(target);
  std::vector<double> out;
  out.reserve(dist.samples.size());
  for (const auto& s : dist.samples) {
    for (double v : s) {
      if (!(v >= -1.0 && v <= 1.0)) throw ValidationError("agf_distribution: value outside [-1, 1]");
    }
    out.push_back(average_gate_fidelity_from(s, target_ptm));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

void SweepConfig::validate() const {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (!(lo >= 0.0 && hi <= kTwoPi && lo <= hi)) {
    throw ValidationError("sweep: grid must satisfy 0 <= lo <= hi <= 2 pi");
  }
  if (count < 1) throw ValidationError("sweep: count must be >= 1");
  if (n_shots < 1 || n_repeats < 1 || trajectories < 1) {
    throw ValidationError("sweep: n_shots, n_repeats and trajectories must be positive");
  }
}

double SweepResult::mean_jsd_sgm() const {
  double acc = 0.0;
  for (const auto& p : points) acc += p.jsd_sgm;
  return points.empty() ? 0.0 : acc / static_cast<double>(points.size());
}

double SweepResult::mean_jsd_pgm() const {
  double acc = 0.0;
  for (const auto& p : points) acc += p.jsd_pgm;
  return points.empty() ? 0.0 : acc / static_cast<double>(points.size());
}

SweepResult sweep(const DeviceSimulator& device, WhiteboxCache& cache, const BlackboxParams& sgm,
                  const VariationalParams& pgm, const Operator2& target, const SweepConfig& config,
                  std::uint64_t seed) {
  config.validate();
  const auto grid = linspace(config.lo, config.hi, config.count);
  SweepResult result;
  result.points.resize(grid.size());
  // Grid points run one after another; every stage inside is itself parallel.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t s = derive_seed(seed, "sweep", i);
    SweepPoint& pt = result.points[i];
    pt.theta = grid[i];
    const auto ensemble = device.intermediate_ensemble({pt.theta, 0.0}, config.trajectories,
                                                       derive_seed(s, "ensemble", 0));
    pt.agf_device = agf_distribution(
        finite_shot_sample(ensemble, config.n_shots, config.n_repeats, derive_seed(s, "shots", 0)),
        target);
    pt.agf_sgm = agf_distribution(sgm_uncertainty(sgm, pt.theta, cache, config.n_shots,
                                                  config.n_repeats, derive_seed(s, "sgm", 0)),
                                  target);
    pt.agf_pgm = agf_distribution(pgm_posterior_predictive(pgm, pt.theta, cache, config.n_shots,
                                                           config.n_repeats, derive_seed(s, "pgm", 0)),
                                  target);
    pt.jsd_sgm = jsd(pt.agf_sgm, pt.agf_device, 0.0, 1.0);
    pt.jsd_pgm = jsd(pt.agf_pgm, pt.agf_device, 0.0, 1.0);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "theta,backend,agf_q05,agf_q50,agf_q95,jsd_sgm,jsd_pgm\n";
  for (const auto& p : result.points) {
    const std::pair<const char*, const std::vector<double>*> rows[] = {
        {"device", &p.agf_device}, {"sgm", &p.agf_sgm}, {"pgm", &p.agf_pgm}};
    for (const auto& [name, samples] : rows) {
      out << format_double(p.theta) << ',' << name << ',' << format_double(quantile(*samples, 0.05))
          << ',' << format_double(quantile(*samples, 0.5)) << ','
          << format_double(quantile(*samples, 0.95)) << ',' << format_double(p.jsd_sgm) << ','
          << format_double(p.jsd_pgm) << '\n';
    }
  }
}

void write_sweep_samples(std::ostream& out, const SweepResult& result) {
  out << "theta,backend,index,agf\n";
  for (const auto& p : result.points) {
    const std::pair<const char*, const std::vector<double>*> rows[] = {
        {"device", &p.agf_device}, {"sgm", &p.agf_sgm}, {"pgm", &p.agf_pgm}};
    for (const auto& [name, samples] : rows) {
      for (std::size_t i = 0; i < samples->size(); ++i) {
        out << format_double(p.theta) << ',' << name << ',' << i << ','
            << format_double((*samples)[i]) << '\n';
      }
    }
  }
}

}  // namespace graybox
