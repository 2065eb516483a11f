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

#include <string_view>
#include <vector>

#include "graybox/tomography.hpp"

namespace graybox {

/// An ensemble of sampled 18-vectors of finite-shot expectation values.
struct PredictiveDistribution {
  enum class Source { Device, SgmResample, PgmPosterior };

  Source source = Source::Device;
  std::vector<Expectations> samples;

  /// Samples of a single channel, in sample order.
  std::vector<double> channel(std::size_t c) const;
  Expectations mean() const;
};

std::string_view to_string(PredictiveDistribution::Source source);

}  // namespace graybox
