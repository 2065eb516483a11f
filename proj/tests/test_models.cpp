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

#include <cmath>
#include <numbers>

#include "graybox/dataset.hpp"
#include "graybox/error.hpp"
#include "graybox/pgm.hpp"
#include "graybox/sgm.hpp"
#include "graybox/whitebox.hpp"
#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

namespace {

using namespace graybox;
constexpr double kPi = std::numbers::pi;

DeviceConfig small_config() {
  DeviceConfig c;
  c.trotter_steps = 400;
  return c;
}

std::vector<ExperimentRecord> small_dataset(std::size_t m, std::size_t n_shots, std::uint64_t seed) {
  return generate_dataset(DeviceSimulator(small_config()), m, n_shots, 3, seed);
}

TEST(Whitebox, CacheHoldsIdealEvolutionAndPostStates) {
  WhiteboxCache cache(small_config());
  const auto& e = cache.get(1.1);
  const Operator2 u = DeviceSimulator(small_config().ideal()).evolve_noiseless({1.1, 0.0});
  EXPECT_LT((e.unitary - u).frobenius_norm(), 1e-15);
  for (std::size_t s = 0; s < 6; ++s) {
    const Operator2 rho = conjugate(u, density(kCardinalStates[s]));
    EXPECT_LT((to_operator(e.post_states[s]) - rho).frobenius_norm(), 1e-14);
  }
  EXPECT_EQ(&cache.get(1.1), &e);
  const std::vector<double> more = {0.2, 0.3, 1.1};
  cache.warm(more);
  EXPECT_EQ(cache.size(), 3u);
}

TEST(Whitebox, JetMethodsAgree) {
  WhiteboxCache cache(small_config());
  for (double theta : {0.3, 1.6, 5.0}) {
    const auto cd = cache.jet(theta, WhiteboxGradient::CentralDifference);
    const auto tg = cache.jet(theta, WhiteboxGradient::Tangent);
    for (std::size_t s = 0; s < 6; ++s) {
      EXPECT_LT((to_operator(cd.derivatives[s]) - to_operator(tg.derivatives[s])).frobenius_norm(), 1e-7);
    }
  }
  EXPECT_STREQ(to_string(WhiteboxGradient::Tangent), "tangent");
}

TEST(Sgm, IdealBlackboxPredictsExactExpectations) {
  WhiteboxCache cache(small_config());
  const auto p = fixture::ideal_blackbox();
  for (double theta : {0.0, 0.9, kPi / 2.0, 4.4}) {
    const auto y = sgm_predict(p, theta, cache);
    const auto exact = exact_expectations(cache.get(theta).unitary);
    for (std::size_t c = 0; c < kChannelCount; ++c) EXPECT_NEAR(y[c], exact[c], 1e-12) << c;
  }
}

TEST(Sgm, LossMatchesDirectMeanSquaredError) {
  WhiteboxCache cache(small_config());
  const auto data = small_dataset(5, 100, 3);
  const auto p = BlackboxParams::initialize(8);
  double expected = 0.0;
  for (const auto& r : data) {
    const auto w = blackbox_forward(p, r.theta);
    const Operator2 u = cache.get(r.theta).unitary;
    for (std::size_t o = 0; o < 3; ++o)
      for (std::size_t s = 0; s < 6; ++s) {
        const double y = (w[o] * conjugate(u, density(kCardinalStates[s]))).trace().real();
        expected += (y - r.exps[6 * o + s]) * (y - r.exps[6 * o + s]) / 18.0 / data.size();
      }
  }
  EXPECT_NEAR(sgm_loss(p.values(), data, cache), expected, 1e-13);
  EXPECT_THROW(sgm_loss(p.values(), std::span<const ExperimentRecord>{}, cache), ValidationError);
}

TEST(Sgm, LossGradientMatchesFiniteDifferences) {
  WhiteboxCache cache(small_config());
  const auto data = small_dataset(6, 1000, 4);
  const auto p = BlackboxParams::initialize(5);
  std::vector<double> grad;
  const std::vector<double> x(p.values().begin(), p.values().end());
  sgm_loss(x, data, cache, &grad);
  const auto report = gradcheck::compare(
      [&](const std::vector<double>& v) { return sgm_loss(v, data, cache); }, x, grad, 1e-5);
  EXPECT_EQ(report.failures, 0u) << "worst rel " << report.worst_rel << " at " << report.worst_index;
}

TEST(Sgm, TrainingReducesLoss) {
  WhiteboxCache cache(small_config());
  const auto data = small_dataset(40, 1000, 6);
  SgmConfig cfg;
  cfg.epochs = 60;
  cfg.batch_size = 10;
  cfg.optimizer.schedule.warmup_steps = 20;
  cfg.optimizer.schedule.decay_steps = 240;
  const auto a = sgm_train(data, cache, cfg, 9);
  const auto b = sgm_train(data, cache, cfg, 9);
  ASSERT_EQ(a.loss_trace.size(), 60u);
  EXPECT_LT(a.loss_trace.back(), 0.5 * a.loss_trace.front());
  EXPECT_EQ(a.loss_trace, b.loss_trace);
}

TEST(Sgm, BinomialResamplingVariance) {
  WhiteboxCache cache(small_config());
  const auto p = fixture::ideal_blackbox();
  const double theta = 1.2;
  const std::size_t n = 500, reps = 20000;
  const auto dist = sgm_uncertainty(p, theta, cache, n, reps, 17);
  EXPECT_EQ(dist.source, PredictiveDistribution::Source::SgmResample);
  const auto y = sgm_predict(p, theta, cache);
  for (std::size_t c : {0ul, 7ul, 16ul}) {
    const auto x = dist.channel(c);
    double m = 0.0, v = 0.0;
    for (double e : x) m += e;
    m /= reps;
    for (double e : x) v += (e - m) * (e - m);
    v /= reps - 1;
    const double var = (1.0 - y[c] * y[c]) / n;
    if (var < 1e-6) continue;
    EXPECT_LT(std::fabs(m - y[c]), 5.0 * std::sqrt(var / reps)) << c;
    EXPECT_NEAR(v / var, 1.0, 0.05) << c;
  }
}

TEST(Pgm, KlNormalMatchesQuadrature) {
  const double cases[][4] = {{0.0, 1.0, 0.0, 1.0}, {0.3, 0.05, 0.0, std::sqrt(0.1)},
                             {-1.0, 2.0, 0.5, 0.7}, {2.0, 0.3, -1.0, 1.5}};
  for (const auto& c : cases) {
    auto pdf = [](double x, double m, double s) {
      return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2.0 * kPi));
    };
    const double q = oracle::simpson(
        [&](double x) {
          const double a = pdf(x, c[0], c[1]);
          return a > 0.0 ? a * std::log(a / pdf(x, c[2], c[3])) : 0.0;
        },
        c[0] - 12.0 * c[1], c[0] + 12.0 * c[1], 20000);
    EXPECT_NEAR(kl_normal(c[0], c[1], c[2], c[3]), q, 1e-8);
  }
}

TEST(Pgm, KlToPriorNonNegativeAndZeroAtPrior) {
  EXPECT_NEAR(kl_to_prior(VariationalParams::prior(0.1), 0.1), 0.0, 1e-12);
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_GT(kl_to_prior(VariationalParams::initialize(s), 0.1), 0.0);
  EXPECT_THROW(VariationalParams::prior(0.0), ValidationError);
}

TEST(Pgm, VariationalParamsLayout) {
  const auto q = VariationalParams::initialize(3, 0.05);
  EXPECT_EQ(q.size(), 410u);
  for (std::size_t i = 0; i < 205; ++i) EXPECT_NEAR(q.scale(i), 0.05, 1e-15);
  const auto flat = q.flat();
  const auto r = VariationalParams::from_flat(flat);
  EXPECT_EQ(r.flat(), flat);
  EXPECT_NEAR(softplus(inverse_softplus(0.3)), 0.3, 1e-15);
  std::vector<double> eps(205, 0.0);
  eps[4] = 2.0;
  const auto w = q.sample(eps);
  EXPECT_NEAR(w[4], q.mean()[4] + 0.1, 1e-15);
  EXPECT_EQ(w[5], q.mean()[5]);
}

TEST(Pgm, BinomialPmfIsNormalisedAndMatchesDirectFormula) {
  const std::size_t n = 40;
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double lp = binomial_log_pmf(k, n, 0.3);
    double choose = 1.0;
    for (std::size_t i = 0; i < k; ++i) choose = choose * (n - i) / (i + 1);
    EXPECT_NEAR(lp, std::log(choose * std::pow(0.3, k) * std::pow(0.7, n - k)), 1e-10);
    total += std::exp(lp);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(shot_count(1.0, 1000), 1000u);
  EXPECT_EQ(shot_count(-1.0, 1000), 0u);
  EXPECT_EQ(shot_count(0.002, 1000), 501u);
}

TEST(Pgm, FrozenNoiseElboGradientMatchesFiniteDifferences) {
  WhiteboxCache cache(small_config());
  const auto data = small_dataset(4, 1000, 7);
  const auto q = VariationalParams::initialize(12);
  Rng rng(99);
  const auto eps = standard_normal(rng, 205);
  const auto terms = pgm_elbo(q, data, 40, cache, eps, 0.1, true);
  const auto without = pgm_elbo(q, data, 40, cache, eps, 0.1, false);
  EXPECT_NEAR(terms.elbo, without.elbo, 1e-9 * std::fabs(without.elbo));
  EXPECT_NEAR(terms.elbo, terms.log_likelihood - 0.1 * terms.kl, 1e-9);
  const auto report = gradcheck::compare(
      [&](const std::vector<double>& v) {
        return pgm_elbo(VariationalParams::from_flat(v), data, 40, cache, eps, 0.1, false).elbo;
      },
      q.flat(), terms.grad, 1e-4);
  EXPECT_EQ(report.failures, 0u) << "worst rel " << report.worst_rel << " at " << report.worst_index;
}

TEST(Pgm, TrainingImprovesElbo) {
  WhiteboxCache cache(small_config());
  const auto data = small_dataset(30, 1000, 8);
  PgmConfig cfg;
  cfg.epochs = 150;
  cfg.optimizer.schedule.warmup_steps = 30;
  cfg.optimizer.schedule.decay_steps = 150;
  const auto r = pgm_train(data, cache, cfg, 4);
  ASSERT_EQ(r.elbo_trace.size(), 150u);
  EXPECT_GT(r.elbo_trace.back(), r.elbo_trace.front());
  for (std::size_t i = 0; i < 205; ++i) EXPECT_GT(r.params.scale(i), 0.0);
}

// As the posterior scales shrink the predictive reduces to the point model.
TEST(Pgm, CollapsedPosteriorMatchesPointModel) {
  WhiteboxCache cache(small_config());
  const auto sgm = BlackboxParams::initialize(31);
  const VariationalParams q(std::vector<double>(sgm.values().begin(), sgm.values().end()),
                            std::vector<double>(205, inverse_softplus(1e-12)));
  const double theta = 2.2;
  const auto mean = pgm_predict_mean(q, theta, cache);
  const auto point = sgm_predict(sgm, theta, cache);
  for (std::size_t c = 0; c < kChannelCount; ++c) EXPECT_NEAR(mean[c], point[c], 1e-14);
  const auto dist = pgm_posterior_predictive(q, theta, cache, 400, 4000, 3);
  EXPECT_EQ(dist.source, PredictiveDistribution::Source::PgmPosterior);
  const auto avg = dist.mean();
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const double se = std::sqrt((1.0 - point[c] * point[c]) / 400.0 / 4000.0);
    EXPECT_LT(std::fabs(avg[c] - point[c]), 5.0 * se + 1e-12) << c;
  }
}

}  // namespace
