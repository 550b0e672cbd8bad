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

#include <cmath>
#include <random>

#include "cre/error.h"
#include "cre/lambert_w.h"
#include "doctest.h"

TEST_CASE("lower branch of Lambert W") {
  CHECK(cre::LambertWm1(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));

  // bisection on w e^w = -0.1 over w <= -1
  double lo = -20, hi = -1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < -0.1 ? hi : lo) = mid;
  }
  CHECK(cre::LambertWm1(-0.1) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-13));
  CHECK(cre::LambertWm1(-0.1) == doctest::Approx(-3.577152).epsilon(1e-6));

  CHECK_THROWS_AS(cre::LambertWm1(0.5), cre::Error);
  CHECK_THROWS_AS(cre::LambertWm1(0.0), cre::Error);
  CHECK_THROWS_AS(cre::LambertWm1(-0.5), cre::Error);
  CHECK_THROWS_AS(cre::LambertWm1(std::nan("")), cre::Error);
}

TEST_CASE("w e^w = x across the domain") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-300.0, std::log(std::exp(-1.0)));
  for (int i = 0; i < 20000; ++i) {
    // log-uniform magnitudes from e^-300 up to 1/e
    const double x = -std::exp(u(rng));
    const double w = cre::LambertWm1(x);
    CHECK(w <= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::abs(x));
  }
}
