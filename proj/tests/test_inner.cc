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
#include <limits>
#include <numbers>
#include <vector>

#include "cre/cost_model.h"
#include "cre/error.h"
#include "cre/inner_solver.h"
#include "doctest.h"
#include "test_util.h"

using cre::testing::RelClose;

namespace {

// One participant with upload time 0.005 s at p = 0.1 W and 2e-4 s epochs.
cre::InnerContext Simple() {
  cre::InnerContext ctx;
  ctx.b_up = 1e6;
  ctx.n0 = 4e-21;
  ctx.bits = 1e4;
  ctx.t_max = 0.01;
  ctx.t_down = 0.001;
  ctx.p_max = 0.2;
  ctx.e_add = 0.00175;
  ctx.energy_unit = 1e-3;
  ctx.clients = {0};
  ctx.queue = {0.0};
  ctx.epoch_energy = {2.5e-4};
  ctx.epoch_latency = {2e-4};
  ctx.gain = {3 * ctx.b_up * ctx.n0 / 0.1};  // SNR 3 at 0.1 W -> 2 Mbps
  ctx.bound = {0.1, 1.0, 1.0, 0.5, 0.01, 1.0, 5.0};
  ctx.v = 0.1;
  return ctx;
}

double Residual(const cre::InnerContext& ctx, std::size_t k, double tau, double p) {
  return ctx.queue[k] + tau * ctx.epoch_energy[k] + cre::UplinkEnergyFor(ctx, k, p) - ctx.e_add;
}

}  // namespace

TEST_CASE("epoch cap from the latency budget") {
  cre::InnerContext ctx = Simple();
  CHECK(RelClose(cre::TauMax(ctx, {0.1}), 20.0, 1e-12));

  ctx.clients = {0, 1};
  ctx.queue = {0.0, 0.0};
  ctx.epoch_energy = {2.5e-4, 2.5e-4};
  ctx.epoch_latency = {2e-4, 0.004 / 12};
  ctx.gain = {ctx.gain[0], ctx.gain[0]};
  CHECK(RelClose(cre::TauMax(ctx, {0.1, 0.1}), 12.0, 1e-12));

  ctx = Simple();
  ctx.t_down = ctx.t_max - 0.005;
  CHECK_THROWS_AS(cre::TauMax(ctx, {0.1}), cre::Error);
}

TEST_CASE("power window") {
  cre::InnerContext ctx = Simple();
  // window 0.01 - 0.001 - 20 * 2e-4 = 0.005 s -> 2 Mbps -> SNR 3
  const auto pw = cre::ComputePowerWindow(ctx, 20.0, 0);
  CHECK(RelClose(pw.p_min, 3 * ctx.b_up * ctx.n0 / ctx.gain[0], 1e-12));
  CHECK(RelClose(pw.e_min, pw.p_min * 0.005, 1e-12));

  ctx.t_max = 1e3;
  const double wide = ctx.t_max - ctx.t_down - 2e-4;
  const double p_wide = std::expm1(ctx.bits / (ctx.b_up * wide) * std::numbers::ln2) * ctx.b_up *
                        ctx.n0 / ctx.gain[0];
  CHECK(RelClose(cre::ComputePowerWindow(ctx, 1.0, 0).p_min, p_wide, 1e-12));
  CHECK(p_wide < 1e-5 * pw.p_min);

  ctx = Simple();
  ctx.gain = {1e300};
  const double p = cre::ComputePowerWindow(ctx, 1.0, 0).p_min;
  CHECK(p > 0.0);
  CHECK(p <= std::numeric_limits<double>::min());

  ctx = Simple();
  ctx.gain = {1e-30};
  CHECK_THROWS_AS(cre::ComputePowerWindow(ctx, 1.0, 0), cre::Error);
}

TEST_CASE("optimal power cases") {
  cre::InnerContext ctx = Simple();
  const auto pw = cre::ComputePowerWindow(ctx, 3.0, 0);
  ctx.queue = {ctx.e_add};  // target energy <= 0
  CHECK(cre::OptimalPower(ctx, 3.0, 0) == pw.p_min);

  ctx.queue = {0.0};
  ctx.e_add = 3 * 2.5e-4 + 10 * pw.e_max;  // wants more than p_max can spend
  CHECK(cre::OptimalPower(ctx, 3.0, 0) == ctx.p_max);

  ctx = Simple();
  const double target = 0.5 * (pw.e_min + pw.e_max);
  ctx.e_add = target + 3 * 2.5e-4;
  const double p = cre::OptimalPower(ctx, 3.0, 0);
  CHECK(RelClose(cre::UplinkEnergyFor(ctx, 0, p), target, 1e-10));
}

TEST_CASE("J2 reductions and derivative") {
  cre::InnerContext ctx = Simple();
  ctx.v = 0;
  ctx.idle_term = 0.25;
  const double r = Residual(ctx, 0, 4.0, 0.1) / ctx.energy_unit;
  CHECK(RelClose(cre::J2Objective(4.0, {0.1}, ctx), 0.25 + r * r, 1e-13));

  ctx = Simple();
  const double h = 1e-5;
  for (double t : {1.0, 2.5, 7.0, 15.0}) {
    const double fd = (cre::J2Objective(t + h, {0.1}, ctx) - cre::J2Objective(t - h, {0.1}, ctx)) / (2 * h);
    CHECK(RelClose(cre::J2TauDerivative(t, {0.1}, ctx), fd, 1e-6, 1e-9));
  }
  // convex in tau
  for (double t = 0.5; t < 19; t += 0.5) {
    const double d2 = cre::J2Objective(t + 0.25, {0.1}, ctx) - 2 * cre::J2Objective(t, {0.1}, ctx) +
                      cre::J2Objective(t - 0.25, {0.1}, ctx);
    CHECK(d2 >= -1e-9);
  }
}

TEST_CASE("epoch rule cases") {
  cre::InnerContext ctx = Simple();
  ctx.queue = {0.01};  // large queue penalty
  ctx.v = 1e-3;
  auto c = cre::OptimalTau(ctx, {0.1});
  CHECK(c.which == cre::TauCase::kDerivativeNonNegative);
  CHECK(c.tau == 1);

  ctx = Simple();
  ctx.v = 1e4;
  ctx.bound.a1 = 0;
  ctx.bound.a3 = 0;
  c = cre::OptimalTau(ctx, {0.1});
  CHECK(c.which == cre::TauCase::kClipped);
  CHECK(c.tau == 20);

  ctx = Simple();
  c = cre::OptimalTau(ctx, {0.1});
  int best = 1;
  for (int t = 2; t <= 20; ++t) {
    if (cre::J2Objective(t, {0.1}, ctx) < cre::J2Objective(best, {0.1}, ctx)) best = t;
  }
  CHECK(c.tau == best);
}

TEST_CASE("alternating solve") {
  cre::InnerContext ctx = Simple();
  cre::Rng rng = cre::MakeRng(1, cre::Stream::kInnerInit);
  const auto res = cre::AlternateSolve(ctx, rng);
  for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1] + 1e-12);
  CHECK(res.tau >= 1);
  CHECK(RelClose(cre::J2Objective(res.tau, res.p, ctx), res.j2, 1e-14));

  // V = 0: only the queue term remains, which the solver drives to zero
  ctx.v = 0;
  const auto flat = cre::AlternateSolve(ctx, rng);
  CHECK(std::abs(Residual(ctx, 0, flat.tau, flat.p[0])) < 1e-12);

  ctx.clients.clear();
  ctx.queue.clear();
  ctx.gain.clear();
  ctx.epoch_energy.clear();
  ctx.epoch_latency.clear();
  try {
    cre::AlternateSolve(ctx, rng);
    FAIL("expected Infeasible");
  } catch (const cre::Error& e) {
    CHECK(e.code() == cre::ErrorCode::kInfeasible);
  }
}
