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

#include "graybox/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "graybox/error.hpp"

namespace graybox {

double ScheduleConfig::learning_rate(std::size_t step) const {
  if (step < warmup_steps) {
    const double frac = static_cast<double>(step) / static_cast<double>(warmup_steps);
    return init_lr + (peak_lr - init_lr) * frac;
  }
  const std::size_t t = step - warmup_steps;
  if (t >= decay_steps) return end_lr;
  const double frac = static_cast<double>(t) / static_cast<double>(decay_steps);
  return end_lr + (peak_lr - end_lr) * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

void ScheduleConfig::validate() const {
  if (!(init_lr >= 0.0) || !(peak_lr > 0.0) || !(end_lr >= 0.0)) {
    throw ValidationError("schedule: learning rates must be non-negative with a positive peak");
  }
}

void AdamWConfig::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("adamw: betas must lie in [0, 1)");
  }
  if (!(eps > 0.0) || !(weight_decay >= 0.0)) {
    throw ValidationError("adamw: eps must be positive and weight decay non-negative");
  }
  schedule.validate();
}

AdamW::AdamW(AdamWConfig config, std::size_t size)
    : config_(config), m_(size, 0.0), v_(size, 0.0) {
  config_.validate();
}

void AdamW::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ValidationError("adamw: expected " + std::to_string(m_.size()) + " parameters");
  }
  const double lr = config_.schedule.learning_rate(count_);
  ++count_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(count_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(count_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i] * grads[i];
    const double update = (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.eps);
    params[i] -= lr * (update + config_.weight_decay * params[i]);
  }
}

}  // namespace graybox
