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

// AVX2 + FMA variants. Compiled with per-function target attributes so the
// rest of the library keeps the baseline ISA; callers must check
// Avx2Supported() first.

#include <cstddef>

#include "cre/kernels.h"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define CRE_HAVE_X86 1
#define CRE_AVX2_FN __attribute__((target("avx2,fma")))
#else
#define CRE_HAVE_X86 0
#endif

namespace cre::kernels::avx2 {

#if CRE_HAVE_X86

namespace {

CRE_AVX2_FN inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

CRE_AVX2_FN double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

CRE_AVX2_FN void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

CRE_AVX2_FN double SquaredNorm(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

CRE_AVX2_FN double SquaredDistance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

#else  // !CRE_HAVE_X86

// Non-x86 builds never select this backend; forward to the reference code.
double Dot(const double* a, const double* b, std::size_t n) { return scalar::Dot(a, b, n); }
void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  scalar::Axpy(alpha, x, y, n);
}
double SquaredNorm(const double* x, std::size_t n) { return scalar::SquaredNorm(x, n); }
double SquaredDistance(const double* a, const double* b, std::size_t n) {
  return scalar::SquaredDistance(a, b, n);
}

#endif

}  // namespace cre::kernels::avx2
