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

#include <random>
#include <vector>

#include "cre/kernels.h"
#include "doctest.h"
#include "test_util.h"

namespace k = cre::kernels;

namespace {

std::vector<double> RandomVec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::Avx2Supported()) {
    MESSAGE("no AVX2 on this CPU; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = RandomVec(rng, n);
    const auto b = RandomVec(rng, n);
    // Different summation order, so compare against the sum of magnitudes.
    double scale = 1e-300;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]) + a[i] * a[i] + b[i] * b[i];

    CHECK(std::abs(k::avx2::Dot(a.data(), b.data(), n) - k::scalar::Dot(a.data(), b.data(), n)) <=
          1e-14 * scale);
    CHECK(std::abs(k::avx2::SquaredNorm(a.data(), n) - k::scalar::SquaredNorm(a.data(), n)) <=
          1e-14 * scale);
    CHECK(std::abs(k::avx2::SquaredDistance(a.data(), b.data(), n) -
                   k::scalar::SquaredDistance(a.data(), b.data(), n)) <= 4e-14 * scale);

    auto y1 = b, y2 = b;
    k::avx2::Axpy(0.37, a.data(), y1.data(), n);
    k::scalar::Axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
  }
}

TEST_CASE("dispatch follows SetBackend") {
  const k::Backend saved = k::ActiveBackend();
  k::SetBackend(k::Backend::kScalar);
  CHECK(k::ActiveBackend() == k::Backend::kScalar);
  CHECK(k::BackendName(k::ActiveBackend()) == "scalar");
  k::SetBackend(k::Backend::kAvx2);
  CHECK(k::ActiveBackend() == (k::Avx2Supported() ? k::Backend::kAvx2 : k::Backend::kScalar));
  k::SetBackend(saved);
}

TEST_CASE("span kernels and matvec") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{5, 4, 3, 2, 1};
  CHECK(k::Dot(a, b) == 35.0);
  CHECK(k::SquaredNorm(a) == 55.0);
  CHECK(k::SquaredDistance(a, b) == 40.0);
  std::vector<double> y(b);
  k::Axpy(2.0, a, y);
  CHECK(y == std::vector<double>{7, 8, 9, 10, 11});

  // 2 x 5 row-major
  std::vector<double> m(a);
  m.insert(m.end(), b.begin(), b.end());
  std::vector<double> out(2);
  k::MatVec(m, a, out);
  CHECK(out[0] == 55.0);
  CHECK(out[1] == 35.0);
}
