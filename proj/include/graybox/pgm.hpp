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
#include <span>
#include <vector>

#include "graybox/blackbox.hpp"
#include "graybox/dataset.hpp"
#include "graybox/optimizer.hpp"
#include "graybox/predictive.hpp"
#include "graybox/rng.hpp"
#include "graybox/whitebox.hpp"

namespace graybox {

/// Mean-field Gaussian over the 205 blackbox weights: w = mean + softplus(raw) * eps.
class VariationalParams {
 public:
  static constexpr std::size_t kParameterCount = 2 * BlackboxLayout::kParameterCount;

  VariationalParams();
  VariationalParams(std::vector<double> mean, std::vector<double> raw_scale);

  /// Means from the blackbox initializer, scales all equal to `init_scale`.
  static VariationalParams initialize(std::uint64_t seed, double init_scale = 0.05);
  /// q equal to the prior N(0, variance I).
  static VariationalParams prior(double variance);
  /// Inverse of the flat [mean..., raw_scale...] layout.
  static VariationalParams from_flat(std::span<const double> flat);

  std::size_t size() const { return mean_.size() + raw_.size(); }
  std::span<const double> mean() const { return mean_; }
  std::span<double> mean() { return mean_; }
  std::span<const double> raw_scale() const { return raw_; }
  std::span<double> raw_scale() { return raw_; }
  double scale(std::size_t i) const;
  std::vector<double> flat() const;
  BlackboxParams mean_params() const { return BlackboxParams(mean_); }
  /// mean + scale * eps.
  std::vector<double> sample(std::span<const double> eps) const;

 private:
  std::vector<double> mean_;
  std::vector<double> raw_;
};

double inverse_softplus(double y);

/// KL(N(mu1, s1^2) || N(mu2, s2^2)) for scalars.
double kl_normal(double mu1, double s1, double mu2, double s2);
/// KL(q || N(0, prior_variance I)).
double kl_to_prior(const VariationalParams& q, double prior_variance);

double log_binomial_coefficient(std::size_t k, std::size_t n);
/// log Binomial(k | n, p).
double binomial_log_pmf(std::size_t k, std::size_t n, double p);
std::size_t shot_count(double value, std::size_t n_shots);

struct ElboTerms {
  double elbo = 0.0;
  double log_likelihood = 0.0;
  double kl = 0.0;
  std::vector<double> grad;  // d ELBO / d [mean, raw_scale]; empty when not requested
};

/// Single-sample ELBO on a batch with frozen noise eps (205 values):
/// sum of Binomial log-likelihoods at w = mean + scale * eps, minus the
/// analytic KL scaled by batch.size() / train_size.
ElboTerms pgm_elbo(const VariationalParams& q, std::span<const ExperimentRecord> batch,
                   std::size_t train_size, WhiteboxCache& cache, std::span<const double> eps,
                   double prior_variance, bool with_gradient);
/// Same, drawing eps from `rng`.
ElboTerms pgm_elbo(const VariationalParams& q, std::span<const ExperimentRecord> batch,
                   std::size_t train_size, WhiteboxCache& cache, Rng& rng,
                   double prior_variance, bool with_gradient);

std::vector<double> standard_normal(Rng& rng, std::size_t n);

struct PgmConfig {
  std::size_t epochs = 10000;
  std::size_t batch_size = 0;  // 0 means the full training set per step
  double prior_variance = 0.1;
  double init_scale = 0.05;
  AdamWConfig optimizer{.schedule = {.warmup_steps = 1000, .decay_steps = 10000}};

  void validate() const;
};

struct PgmTrainResult {
  VariationalParams params;
  std::vector<double> elbo_trace;  // per step
};

/// Maximises the ELBO with AdamW. Step s draws eps from
/// derive_seed(seed, "pgm-eps", s). A non-finite ELBO throws NumericError
/// whose snapshot is the last finite variational state (flat layout).
PgmTrainResult pgm_train(std::span<const ExperimentRecord> train, WhiteboxCache& cache,
                         const PgmConfig& config, std::uint64_t seed);

/// Graybox prediction with the posterior-mean weights.
Expectations pgm_predict_mean(const VariationalParams& q, double theta, WhiteboxCache& cache);

/// Each sample draws w ~ q, predicts, and draws Binomial(n_shots) counts per
/// channel. Sample i uses derive_seed(seed, "pgm-posterior", i).
PredictiveDistribution pgm_posterior_predictive(const VariationalParams& q, double theta,
                                                WhiteboxCache& cache, std::size_t n_shots,
                                                std::size_t n_weight_samples, std::uint64_t seed);

}  // namespace graybox
