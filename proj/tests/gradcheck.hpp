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

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace gradcheck {

struct Report {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst_rel = 0.0;  // worst |g - fd| / |fd| among coordinates above the floor
  double worst_abs = 0.0;  // worst |g - fd| among coordinates below the floor
  std::size_t worst_index = 0;
  std::size_t refined = 0;  // coordinates that needed a smaller step than the first
};

/// Five-point central difference d f / d x_i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  auto at = [&](double d) {
    x[i] = x0 + d;
    return f(x);
  };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

/// Evaluates the stencil over a ladder of decreasing steps and returns the
/// first estimate that agrees with the next one to within their combined
/// roundoff bound (about 4 eps |f| * 1.5 / h each). Without such a pair it
/// falls back to the pair that disagrees least. Large steps lose to a nearby
/// kink, small ones to roundoff; the choice never looks at the gradient
/// under test.
inline double settled_difference(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& x, std::size_t i,
                                 const std::vector<double>& steps, std::size_t* used = nullptr) {
  const double scale = std::fabs(f(x));
  auto noise = [&](double h) { return 4.0 * 2.2e-16 * std::max(scale, 1.0) * 1.5 / h; };
  std::vector<double> est;
  for (double h : steps) est.push_back(central_difference(f, x, i, h));
  std::size_t best = 0;
  for (std::size_t k = 0; k + 1 < est.size(); ++k) {
    const double gap = std::fabs(est[k] - est[k + 1]);
    if (gap <= noise(steps[k]) + noise(steps[k + 1]) + 1e-9 * std::fabs(est[k])) {
      if (used != nullptr) *used = k;
      return est[k];
    }
    if (gap < std::fabs(est[best] - est[best + 1])) best = k;
  }
  if (used != nullptr) *used = best;
  return est[best];
}

/// A coordinate passes when |g - fd| <= rel_tol * |fd|, or |g - fd| <= abs_floor.
/// The reference is settled_difference over h, h/10, h/100, h/1000.
inline Report compare(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& x, const std::vector<double>& grad, double h,
                      double rel_tol = 1e-4, double abs_floor = 1e-8) {
  Report r;
  const std::vector<double> steps = {h, h / 10, h / 100, h / 1000};
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t used = 0;
    const double fd = settled_difference(f, x, i, steps, &used);
    if (used > 0) ++r.refined;
    const double err = std::fabs(grad[i] - fd);
    ++r.checked;
    const bool ok = err <= abs_floor || err <= rel_tol * std::fabs(fd);
    if (!ok) ++r.failures;
    if (err > abs_floor) {
      const double rel = err / std::fabs(fd);
      if (rel > r.worst_rel) {
        r.worst_rel = rel;
        r.worst_index = i;
      }
    } else {
      r.worst_abs = std::max(r.worst_abs, err);
    }
  }
  return r;
}

}  // namespace gradcheck
