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
#include <numbers>
#include <random>

#include "graybox/error.hpp"
#include "graybox/noise.hpp"
#include "graybox/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace graybox;

constexpr double kHorizon = 320.0 * 2.0 / 9.0;

TEST(Psd, ClosedFormValues) {
  EXPECT_NEAR(psd_value(0.0), 1.0 + 0.8 * std::exp(-22.5), 1e-15);
  EXPECT_NEAR(psd_value(0.0), 1.0000000001, 1e-10);
  EXPECT_NEAR(psd_value(15.0), 0.8625, 1e-15);
  EXPECT_LT(psd_value(1e9), 1e-8);
  EXPECT_THROW(psd_value(-0.1), ValidationError);
}

TEST(Psd, SpecValidation) {
  PsdSpec bad;
  bad.n_freq = 1;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = PsdSpec{};
  bad.f_max = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(NoiseTrace, ZeroSpectrumGivesZeroTrace) {
  Rng rng(1);
  const auto trace = sample_noise_trace(PsdSpec::zero(), 1000, kHorizon, rng);
  ASSERT_EQ(trace.samples.size(), 1000u);
  for (double v : trace.samples) EXPECT_EQ(v, 0.0);
}

TEST(NoiseTrace, RejectsTooFewSteps) {
  Rng rng(1);
  EXPECT_THROW(sample_noise_trace(PsdSpec{}, 1, kHorizon, rng), ValidationError);
}

// The fast synthesiser must equal the literal cosine sum with the same phases.
TEST(NoiseTrace, MatchesDirectCosineSum) {
  const PsdSpec psd;
  for (std::size_t steps : {2u, 777u, 4000u}) {
    Rng rng(42);
    const auto trace = sample_noise_trace(psd, steps, kHorizon, rng);
    Rng replay(42);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> phases(psd.n_freq), freqs(psd.n_freq), power(psd.n_freq);
    const double df = psd.f_max / static_cast<double>(psd.n_freq);
    for (std::size_t k = 0; k < psd.n_freq; ++k) {
      phases[k] = phase(replay);
      freqs[k] = (static_cast<double>(k) + 0.5) * df;
      power[k] = psd_value(freqs[k]) * df;
    }
    const auto direct = oracle::noise_direct(power, freqs, phases, steps, kHorizon);
    for (std::size_t j = 0; j < steps; ++j) EXPECT_NEAR(trace.samples[j], direct[j], 1e-9) << j;
    EXPECT_NEAR(trace.dt_step, kHorizon / static_cast<double>(steps), 1e-15);
  }
}

TEST(NoiseTrace, SeedDeterminism) {
  Rng a(9), b(9);
  const auto x = sample_noise_trace(PsdSpec{}, 10000, kHorizon, a);
  const auto y = sample_noise_trace(PsdSpec{}, 10000, kHorizon, b);
  EXPECT_EQ(x.samples, y.samples);
}

class NoiseEnsemble : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const PsdSpec psd;
    NoiseSynthesizer synth(psd, kSteps, kHorizon);
    traces_ = new std::vector<std::vector<double>>(kTraces);
    for (std::size_t i = 0; i < kTraces; ++i) {
      Rng rng = make_rng(123, "noise-test", i);
      (*traces_)[i] = synth.sample(rng).samples;
    }
  }
  static void TearDownTestSuite() {
    delete traces_;
    traces_ = nullptr;
  }
  static std::vector<double> slice(std::size_t j) {
    std::vector<double> out;
    out.reserve(kTraces);
    for (const auto& t : *traces_) out.push_back(t[j]);
    return out;
  }

  static constexpr std::size_t kTraces = 10000;
  static constexpr std::size_t kSteps = 10000;
  static std::vector<std::vector<double>>* traces_;
};
std::vector<std::vector<double>>* NoiseEnsemble::traces_ = nullptr;

double analytic_variance(const PsdSpec& psd) {
  const double df = psd.f_max / static_cast<double>(psd.n_freq);
  double v = 0.0;
  for (std::size_t k = 0; k < psd.n_freq; ++k) v += psd_value((static_cast<double>(k) + 0.5) * df) * df;
  return v;
}

TEST_F(NoiseEnsemble, MeanIsZeroAtEveryStep) {
  const double sigma = std::sqrt(analytic_variance(PsdSpec{}));
  const double se = sigma / std::sqrt(static_cast<double>(kTraces));
  std::vector<double> mean(kSteps, 0.0);
  for (const auto& t : *traces_)
    for (std::size_t j = 0; j < kSteps; ++j) mean[j] += t[j];
  for (std::size_t j = 0; j < kSteps; ++j) {
    ASSERT_LT(std::fabs(mean[j] / kTraces), 5.0 * se) << "step " << j;
  }
}

TEST_F(NoiseEnsemble, VarianceMatchesSpectrumSum) {
  const double expected = analytic_variance(PsdSpec{});
  EXPECT_NEAR(PsdSpec{}.discrete_variance(), expected, 1e-12);
  for (std::size_t j : {0ul, 2500ul, 5000ul, 9999ul}) {
    const auto x = slice(j);
    double m = 0.0, v = 0.0;
    for (double a : x) m += a;
    m /= x.size();
    for (double a : x) v += (a - m) * (a - m);
    v /= x.size() - 1;
    EXPECT_NEAR(v / expected, 1.0, 0.05) << "step " << j;
  }
}

// Two-sample Kolmogorov-Smirnov test between distant time slices, alpha = 0.01.
TEST_F(NoiseEnsemble, StationaryAcrossTime) {
  auto a = slice(100);
  auto b = slice(8700);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    const double x = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= x) ++i;
    while (k < b.size() && b[k] <= x) ++k;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(k) / b.size()));
  }
  const double n = static_cast<double>(kTraces);
  EXPECT_LT(d, 1.628 * std::sqrt(2.0 / n));
}

}  // namespace
