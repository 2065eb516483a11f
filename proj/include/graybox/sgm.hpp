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
#include "graybox/whitebox.hpp"

namespace graybox {

struct SgmConfig {
  std::size_t epochs = 1000;
  std::size_t batch_size = 100;
  AdamWConfig optimizer{.schedule = {.warmup_steps = 800, .decay_steps = 8000}};

  void validate() const;
};

struct SgmTrainResult {
  BlackboxParams params;
  std::vector<double> loss_trace;  // mean minibatch loss per epoch
};

/// Tr[W_O(theta) U0 rho U0^dagger] for the 18 channels.
Expectations sgm_predict(const BlackboxParams& params, double theta, WhiteboxCache& cache);

/// Mean over records of (1/18) sum_c (yhat_c - y_c)^2. Fills `grad` when non-null.
double sgm_loss(std::span<const double> params, std::span<const ExperimentRecord> batch,
                WhiteboxCache& cache, std::vector<double>* grad = nullptr);

SgmTrainResult sgm_train(std::span<const ExperimentRecord> train, WhiteboxCache& cache,
                         const SgmConfig& config, std::uint64_t seed);

/// Finite-shot resampling of the point prediction: every channel is a
/// Binomial(n_shots, (1 + yhat)/2) count. Repeat r uses
/// derive_seed(seed, "sgm-resample", r).
PredictiveDistribution sgm_uncertainty(const BlackboxParams& params, double theta,
                                       WhiteboxCache& cache, std::size_t n_shots,
                                       std::size_t n_repeats, std::uint64_t seed);

/// Binomial resampling of a fixed 18-vector of exact expectations.
Expectations binomial_shots(const Expectations& exact, std::size_t n_shots, Rng& rng);

}  // namespace graybox
