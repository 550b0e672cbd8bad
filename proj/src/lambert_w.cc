// Copyright 2026 The CRE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cre/lambert_w.h"

#include <cmath>
#include <numbers>

#include "cre/error.h"

namespace cre {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Initial guess: branch-point series near -1/e, log asymptotics near 0.
double InitialGuess(double x) {
  if (x < -0.25) {
    const double p = -std::sqrt(2.0 * std::numbers::e * (x + kInvE));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double LambertWm1(double x) {
  if (std::isnan(x) || x >= 0.0 || x < -kInvE - 1e-15) {
    throw Error(ErrorCode::kDomainError, "W_{-1} needs x in [-1/e, 0)");
  }
  if (x <= -kInvE) return -1.0;

  // Solve g(w) = w + log(-w) - log(-x) = 0 on w <= -1. g is increasing there
  // and g(-1) >= 0, which gives a bracket for a safeguarded Halley iteration.
  const double target = std::log(-x);
  auto g = [&](double w) { return w + std::log(-w) - target; };

  double hi = -1.0;
  double lo = std::min(InitialGuess(x), -1.0) - 1.0;
  while (g(lo) > 0) lo = 2.0 * lo - 1.0;

  double w = std::min(std::max(InitialGuess(x), lo), hi);
  for (int it = 0; it < 100; ++it) {
    const double f = g(w);
    if (f == 0.0) break;
    if (f > 0) {
      hi = w;
    } else {
      lo = w;
    }
    const double d1 = 1.0 + 1.0 / w;
    const double d2 = -1.0 / (w * w);
    double next = w - 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-15 * std::abs(w)) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

}  // namespace cre
