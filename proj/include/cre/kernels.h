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

// Dense double-precision kernels used by training, aggregation and the
// estimators. Each kernel has a scalar reference and an AVX2/FMA variant; the
// variant is chosen once at startup from CPUID and can be overridden.

#ifndef CRE_KERNELS_H_
#define CRE_KERNELS_H_

#include <span>
#include <string_view>

namespace cre::kernels {

enum class Backend { kScalar, kAvx2 };

bool Avx2Supported();
Backend ActiveBackend();
std::string_view BackendName(Backend b);
// Falls back to kScalar when kAvx2 is requested on a CPU without it.
void SetBackend(Backend b);

double Dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
double SquaredNorm(std::span<const double> x);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
// out[r] = dot(row r of m, x) for a rows x x.size() row-major matrix.
void MatVec(std::span<const double> m, std::span<const double> x, std::span<double> out);

namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
double SquaredNorm(const double* x, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
double SquaredNorm(const double* x, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
}  // namespace avx2

}  // namespace cre::kernels

#endif  // CRE_KERNELS_H_
