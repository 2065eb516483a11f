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
#include <span>
#include <vector>

namespace graybox {

/// Linear warmup from `init_lr` to `peak_lr`, then cosine decay to `end_lr`
/// over `decay_steps`, then constant.
struct ScheduleConfig {
  double init_lr = 1e-6;
  double peak_lr = 1e-2;
  double end_lr = 1e-6;
  std::size_t warmup_steps = 800;
  std::size_t decay_steps = 8000;

  double learning_rate(std::size_t step) const;
  void validate() const;
};

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
  ScheduleConfig schedule;

  void validate() const;
};

/// AdamW with decoupled weight decay. `step` minimises: params -= lr * update.
class AdamW {
 public:
  AdamW(AdamWConfig config, std::size_t size);

  void step(std::span<double> params, std::span<const double> grads);

  std::size_t steps() const { return count_; }
  const AdamWConfig& config() const { return config_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  AdamWConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t count_ = 0;
};

}  // namespace graybox
