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

#include "graybox/sgm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "graybox/error.hpp"
#include "graybox/parallel.hpp"
#include "graybox/rng.hpp"
#include "record_tape.hpp"

namespace graybox {

void SgmConfig::validate() const {
  if (epochs < 1) throw ValidationError("sgm: epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("sgm: batch_size must be >= 1");
  optimizer.validate();
}

Expectations sgm_predict(const BlackboxParams& params, double theta, WhiteboxCache& cache) {
  const WhiteboxEntry& entry = cache.get(theta);
  return graybox_expectations<double>(params.values(), theta, entry.post_states);
}

double sgm_loss(std::span<const double> params, std::span<const ExperimentRecord> batch,
                WhiteboxCache& cache, std::vector<double>* grad) {
  if (batch.empty()) throw ValidationError("sgm_loss: empty batch");
  if (params.size() != BlackboxLayout::kParameterCount) {
    throw ValidationError("sgm_loss: expected 205 parameters");
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  if (grad == nullptr) {
    for (const auto& rec : batch) {
      const auto y = graybox_expectations<double>(params, rec.theta, cache.get(rec.theta).post_states);
      double sq = 0.0;
      for (std::size_t c = 0; c < kChannelCount; ++c) sq += square(y[c] - rec.exps[c]);
      total += scale * sq / static_cast<double>(kChannelCount);
    }
  } else {
    grad->assign(params.size(), 0.0);
    detail::RecordTape tape(params);
    for (const auto& rec : batch) {
      const auto& post = cache.get(rec.theta).post_states;
      total += scale * tape.accumulate(
                           [&](ad::Tape&, std::span<const ad::Var> w) {
                             const auto y = graybox_expectations<ad::Var>(w, ad::Var(rec.theta), post);
                             ad::Var sq = 0.0;
                             for (std::size_t c = 0; c < kChannelCount; ++c) {
                               sq = sq + ad::square(y[c] - rec.exps[c]);
                             }
                             return sq * (1.0 / static_cast<double>(kChannelCount));
                           },
                           *grad, scale);
    }
  }
  if (!std::isfinite(total)) {
    throw NumericError("sgm_loss: non-finite loss", std::vector<double>(params.begin(), params.end()));
  }
  return total;
}

SgmTrainResult sgm_train(std::span<const ExperimentRecord> train, WhiteboxCache& cache,
                         const SgmConfig& config, std::uint64_t seed) {
  config.validate();
  if (train.empty()) throw ValidationError("sgm_train: empty dataset");
  std::vector<double> thetas;
  for (const auto& rec : train) thetas.push_back(rec.theta);
  cache.warm(thetas);

  SgmTrainResult result{BlackboxParams::initialize(seed), {}};
  AdamW opt(config.optimizer, BlackboxLayout::kParameterCount);
  std::vector<std::size_t> order(train.size());
  std::vector<ExperimentRecord> batch;
  std::vector<double> grad;
  result.loss_trace.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = make_rng(seed, "sgm-shuffle", epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(train[order[i]]);
      epoch_loss += sgm_loss(result.params.values(), batch, cache, &grad);
      ++batches;
      opt.step(result.params.values(), grad);
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

Expectations binomial_shots(const Expectations& exact, std::size_t n_shots, Rng& rng) {
  Expectations out{};
  const double n = static_cast<double>(n_shots);
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const double p = std::clamp(0.5 * (1.0 + exact[c]), 0.0, 1.0);
    std::binomial_distribution<long long> draw(static_cast<long long>(n_shots), p);
    out[c] = (2.0 * static_cast<double>(draw(rng)) - n) / n;
  }
  return out;
}

PredictiveDistribution sgm_uncertainty(const BlackboxParams& params, double theta,
                                       WhiteboxCache& cache, std::size_t n_shots,
                                       std::size_t n_repeats, std::uint64_t seed) {
  if (n_shots < 1) throw ValidationError("sgm_uncertainty: n_shots must be >= 1");
  const Expectations pred = sgm_predict(params, theta, cache);
  for (double v : pred) {
    if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12)) {
      throw std::logic_error("sgm_uncertainty: prediction outside [-1, 1]");
    }
  }
  PredictiveDistribution dist;
  dist.source = PredictiveDistribution::Source::SgmResample;
  dist.samples.resize(n_repeats);
  parallel_for(n_repeats, [&](std::size_t r) {
    Rng rng = make_rng(seed, "sgm-resample", r);
    dist.samples[r] = binomial_shots(pred, n_shots, rng);
  });
  return dist;
}

}  // namespace graybox
