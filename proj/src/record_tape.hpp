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

#include <span>
#include <vector>

#include "graybox/autodiff.hpp"

namespace graybox::detail {

/// Reusable tape for per-record gradients over a fixed parameter vector.
/// The leaves occupy the first nodes, so clearing back to them keeps the
/// allocation warm between records.
class RecordTape {
 public:
  explicit RecordTape(std::span<const double> params) {
    tape_.reserve(4096);
    reset(params);
  }

  void reset(std::span<const double> params) {
    tape_.clear();
    leaves_.clear();
    for (double p : params) leaves_.push_back(tape_.variable(p));
  }

  /// Evaluates f(tape, leaves), adds scale * d f / d leaves into grad and
  /// returns the value. The tape is rewound to the leaves afterwards.
  template <typename F>
  double accumulate(F&& f, std::span<double> grad, double scale) {
    const ad::Var out = f(tape_, std::span<const ad::Var>(leaves_));
    tape_.backward(out, adjoint_);
    for (std::size_t i = 0; i < leaves_.size(); ++i) grad[i] += scale * adjoint_[i];
    truncate();
    return out.value();
  }

 private:
  void truncate() { tape_.truncate(leaves_.size()); }

  ad::Tape tape_;
  std::vector<ad::Var> leaves_;
  std::vector<double> adjoint_;
};

}  // namespace graybox::detail
