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

#include "graybox/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "graybox/error.hpp"
#include "graybox/parallel.hpp"
#include "graybox/sgm.hpp"
#include "record_tape.hpp"

namespace graybox {
namespace {

constexpr std::size_t kWeights = BlackboxLayout::kParameterCount;
constexpr double kProbFloor = 1e-6;

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

VariationalParams::VariationalParams() : mean_(kWeights, 0.0), raw_(kWeights, 0.0) {}

VariationalParams::VariationalParams(std::vector<double> mean, std::vector<double> raw_scale)
    : mean_(std::move(mean)), raw_(std::move(raw_scale)) {
  if (mean_.size() != kWeights || raw_.size() != kWeights) {
    throw ValidationError("VariationalParams: expected 205 means and 205 raw scales");
  }
}

VariationalParams VariationalParams::initialize(std::uint64_t seed, double init_scale) {
  if (!(init_scale > 0.0)) throw ValidationError("VariationalParams: init_scale must be positive");
  const BlackboxParams init = BlackboxParams::initialize(seed);
  return VariationalParams(std::vector<double>(init.values().begin(), init.values().end()),
                           std::vector<double>(kWeights, inverse_softplus(init_scale)));
}

VariationalParams VariationalParams::prior(double variance) {
  if (!(variance > 0.0)) throw ValidationError("VariationalParams: prior variance must be positive");
  return VariationalParams(std::vector<double>(kWeights, 0.0),
                           std::vector<double>(kWeights, inverse_softplus(std::sqrt(variance))));
}

VariationalParams VariationalParams::from_flat(std::span<const double> flat) {
  if (flat.size() != kParameterCount) {
    throw ValidationError("VariationalParams: expected 410 values, got " + std::to_string(flat.size()));
  }
  return VariationalParams(std::vector<double>(flat.begin(), flat.begin() + kWeights),
                           std::vector<double>(flat.begin() + kWeights, flat.end()));
}

double VariationalParams::scale(std::size_t i) const { return softplus(raw_[i]); }

std::vector<double> VariationalParams::flat() const {
  std::vector<double> out(mean_);
  out.insert(out.end(), raw_.begin(), raw_.end());
  return out;
}

std::vector<double> VariationalParams::sample(std::span<const double> eps) const {
  if (eps.size() != kWeights) throw ValidationError("VariationalParams: eps must have 205 values");
  std::vector<double> w(kWeights);
  for (std::size_t i = 0; i < kWeights; ++i) w[i] = mean_[i] + scale(i) * eps[i];
  return w;
}

double inverse_softplus(double y) {
  if (!(y > 0.0)) throw ValidationError("inverse_softplus: argument must be positive");
  return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

double kl_normal(double mu1, double s1, double mu2, double s2) {
  return std::log(s2 / s1) + (s1 * s1 + square(mu1 - mu2)) / (2.0 * s2 * s2) - 0.5;
}

double kl_to_prior(const VariationalParams& q, double prior_variance) {
  const double s2 = std::sqrt(prior_variance);
  double kl = 0.0;
  for (std::size_t i = 0; i < kWeights; ++i) kl += kl_normal(q.mean()[i], q.scale(i), 0.0, s2);
  return kl;
}

std::size_t shot_count(double value, std::size_t n_shots) {
  const double n = static_cast<double>(n_shots);
  const double k = std::round(n * (1.0 + value) / 2.0);
  return static_cast<std::size_t>(std::clamp(k, 0.0, n));
}

double log_binomial_coefficient(std::size_t k, std::size_t n) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
}

double binomial_log_pmf(std::size_t k, std::size_t n, double p) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return log_binomial_coefficient(k, n) + kk * std::log(p) + (nn - kk) * std::log1p(-p);
}

std::vector<double> standard_normal(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

ElboTerms pgm_elbo(const VariationalParams& q, std::span<const ExperimentRecord> batch,
                   std::size_t train_size, WhiteboxCache& cache, std::span<const double> eps,
                   double prior_variance, bool with_gradient) {
  if (batch.empty()) throw ValidationError("pgm_elbo: empty batch");
  if (train_size < batch.size()) throw ValidationError("pgm_elbo: train_size smaller than batch");
  const std::vector<double> w = q.sample(eps);
  const double kl_weight = static_cast<double>(batch.size()) / static_cast<double>(train_size);

  ElboTerms out;
  std::vector<double> dw;
  if (with_gradient) {
    dw.assign(kWeights, 0.0);
    detail::RecordTape tape(w);
    for (const auto& rec : batch) {
      const auto& post = cache.get(rec.theta).post_states;
      out.log_likelihood += tape.accumulate(
          [&](ad::Tape&, std::span<const ad::Var> wv) {
            const auto y = graybox_expectations<ad::Var>(wv, ad::Var(rec.theta), post);
            ad::Var ll = 0.0;
            for (std::size_t c = 0; c < kChannelCount; ++c) {
              const std::size_t k = shot_count(rec.exps[c], rec.n_shots);
              const ad::Var p = ad::clamp((y[c] + 1.0) * 0.5, kProbFloor, 1.0 - kProbFloor);
              const double kk = static_cast<double>(k);
              const double nk = static_cast<double>(rec.n_shots - k);
              const double log_choose = log_binomial_coefficient(k, rec.n_shots);
              ll = ll + (log_choose + kk * ad::log(p) + nk * ad::log(1.0 - p));
            }
            return ll;
          },
          dw, 1.0);
    }
  } else {
    for (const auto& rec : batch) {
      const auto y = graybox_expectations<double>(w, rec.theta, cache.get(rec.theta).post_states);
      for (std::size_t c = 0; c < kChannelCount; ++c) {
        const double p = std::clamp((y[c] + 1.0) * 0.5, kProbFloor, 1.0 - kProbFloor);
        out.log_likelihood += binomial_log_pmf(shot_count(rec.exps[c], rec.n_shots), rec.n_shots, p);
      }
    }
  }
  out.kl = kl_to_prior(q, prior_variance);
  out.elbo = out.log_likelihood - kl_weight * out.kl;
  if (!std::isfinite(out.elbo)) {
    std::vector<double> snapshot = w;
    snapshot.insert(snapshot.end(), eps.begin(), eps.end());
    throw NumericError("pgm_elbo: non-finite ELBO (snapshot: weight sample then eps)", snapshot);
  }
  if (with_gradient) {
    const double v = prior_variance;
    out.grad.assign(VariationalParams::kParameterCount, 0.0);
    for (std::size_t i = 0; i < kWeights; ++i) {
      const double s = q.scale(i);
      const double ds = sigmoid(q.raw_scale()[i]);
      // d KL/d mu = mu / v, d KL/d s = -1/s + s / v.
      out.grad[i] = dw[i] - kl_weight * q.mean()[i] / v;
      out.grad[kWeights + i] = (dw[i] * eps[i] - kl_weight * (-1.0 / s + s / v)) * ds;
    }
  }
  return out;
}

ElboTerms pgm_elbo(const VariationalParams& q, std::span<const ExperimentRecord> batch,
                   std::size_t train_size, WhiteboxCache& cache, Rng& rng,
                   double prior_variance, bool with_gradient) {
  const auto eps = standard_normal(rng, kWeights);
  return pgm_elbo(q, batch, train_size, cache, eps, prior_variance, with_gradient);
}

void PgmConfig::validate() const {
  if (epochs < 1) throw ValidationError("pgm: epochs must be >= 1");
  if (!(prior_variance > 0.0)) throw ValidationError("pgm: prior_variance must be positive");
  if (!(init_scale > 0.0)) throw ValidationError("pgm: init_scale must be positive");
  optimizer.validate();
}

PgmTrainResult pgm_train(std::span<const ExperimentRecord> train, WhiteboxCache& cache,
                         const PgmConfig& config, std::uint64_t seed) {
  config.validate();
  if (train.empty()) throw ValidationError("pgm_train: empty dataset");
  std::vector<double> thetas;
  for (const auto& rec : train) thetas.push_back(rec.theta);
  cache.warm(thetas);

  PgmTrainResult result{VariationalParams::initialize(seed, config.init_scale), {}};
  std::vector<double> flat = result.params.flat();
  std::vector<double> last_good = flat;
  AdamW opt(config.optimizer, flat.size());
  const std::size_t batch_size =
      config.batch_size == 0 ? train.size() : std::min(config.batch_size, train.size());
  const std::size_t batches = (train.size() + batch_size - 1) / batch_size;
  std::vector<double> descent(flat.size());
  result.elbo_trace.reserve(config.epochs * batches);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (batches > 1) {
      Rng shuffle = make_rng(seed, "pgm-shuffle", epoch);
      std::shuffle(order.begin(), order.end(), shuffle);
    }
    for (std::size_t b = 0; b < batches; ++b, ++step) {
      std::vector<ExperimentRecord> batch;
      for (std::size_t i = b * batch_size; i < std::min(train.size(), (b + 1) * batch_size); ++i) {
        batch.push_back(train[order[i]]);
      }
      Rng rng = make_rng(seed, "pgm-eps", step);
      ElboTerms terms;
      try {
        terms = pgm_elbo(VariationalParams::from_flat(flat), batch, train.size(), cache, rng,
                         config.prior_variance, true);
      } catch (const NumericError& e) {
        throw NumericError(std::string("pgm_train: diverged at step ") + std::to_string(step) +
                               " (" + e.what() + "); snapshot is the last finite state",
                           last_good);
      }
      last_good = flat;
      result.elbo_trace.push_back(terms.elbo);
      for (std::size_t i = 0; i < flat.size(); ++i) descent[i] = -terms.grad[i];
      opt.step(flat, descent);
    }
  }
  result.params = VariationalParams::from_flat(flat);
  return result;
}

Expectations pgm_predict_mean(const VariationalParams& q, double theta, WhiteboxCache& cache) {
  return graybox_expectations<double>(q.mean(), theta, cache.get(theta).post_states);
}

PredictiveDistribution pgm_posterior_predictive(const VariationalParams& q, double theta,
                                                WhiteboxCache& cache, std::size_t n_shots,
                                                std::size_t n_weight_samples, std::uint64_t seed) {
  if (n_shots < 1) throw ValidationError("pgm_posterior_predictive: n_shots must be >= 1");
  const auto& post = cache.get(theta).post_states;
  PredictiveDistribution dist;
  dist.source = PredictiveDistribution::Source::PgmPosterior;
  dist.samples.resize(n_weight_samples);
  parallel_for(n_weight_samples, [&](std::size_t i) {
    Rng rng = make_rng(seed, "pgm-posterior", i);
    const auto eps = standard_normal(rng, kWeights);
    const auto w = q.sample(eps);
    const auto y = graybox_expectations<double>(std::span<const double>(w), theta, post);
    dist.samples[i] = binomial_shots(y, n_shots, rng);
  });
  return dist;
}

}  // namespace graybox
