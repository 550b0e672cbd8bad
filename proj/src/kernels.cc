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

#include "cre/kernels.h"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

namespace cre::kernels {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
};

constexpr Table kScalarTable{scalar::Dot, scalar::Axpy, scalar::SquaredNorm,
                             scalar::SquaredDistance};
constexpr Table kAvx2Table{avx2::Dot, avx2::Axpy, avx2::SquaredNorm,
                           avx2::SquaredDistance};

Backend DetectDefault() {
  // CRE_KERNELS=scalar pins the reference path, e.g. for bisecting.
  if (const char* env = std::getenv("CRE_KERNELS"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::kScalar;
  }
  return Avx2Supported() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& ActiveSlot() {
  static std::atomic<Backend> active{DetectDefault()};
  return active;
}

const Table& Active() {
  return ActiveSlot().load(std::memory_order_relaxed) == Backend::kAvx2 ? kAvx2Table
                                                                         : kScalarTable;
}

}  // namespace

bool Avx2Supported() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported;
#else
  return false;
#endif
}

Backend ActiveBackend() { return ActiveSlot().load(std::memory_order_relaxed); }

std::string_view BackendName(Backend b) {
  return b == Backend::kAvx2 ? "avx2" : "scalar";
}

void SetBackend(Backend b) {
  if (b == Backend::kAvx2 && !Avx2Supported()) b = Backend::kScalar;
  ActiveSlot().store(b, std::memory_order_relaxed);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().dot(a.data(), b.data(), a.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

double SquaredNorm(std::span<const double> x) {
  return Active().squared_norm(x.data(), x.size());
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().squared_distance(a.data(), b.data(), a.size());
}

void MatVec(std::span<const double> m, std::span<const double> x, std::span<double> out) {
  const std::size_t cols = x.size();
  assert(m.size() == cols * out.size());
  const Table& t = Active();
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = t.dot(m.data() + r * cols, x.data(), cols);
  }
}

}  // namespace cre::kernels
