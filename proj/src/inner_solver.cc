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

#include "cre/inner_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cre/error.h"
#include "cre/lambert_w.h"

namespace cre {
namespace {

double Rate(const InnerContext& ctx, std::size_t k, double p) {
  if (p <= 0) return 0.0;
  return ctx.b_up * std::log1p(p * ctx.gain[k] / (ctx.b_up * ctx.n0)) / std::numbers::ln2;
}

double UploadTime(const InnerContext& ctx, std::size_t k, double p) {
  const double r = Rate(ctx, k, p);
  if (!(r > 0)) throw Error(ErrorCode::kZeroRate, "participant has zero uplink rate");
  return ctx.bits / r;
}

// Queue residual Z + tau E + e - E_add in objective units.
double Residual(const InnerContext& ctx, std::size_t k, double tau, double e) {
  return (ctx.queue[k] + tau * ctx.epoch_energy[k] + e - ctx.e_add) / ctx.energy_unit;
}

}  // namespace

double UplinkEnergyFor(const InnerContext& ctx, std::size_t k, double p) {
  return p * UploadTime(ctx, k, p);
}

double J2Objective(double tau, const std::vector<double>& p, const InnerContext& ctx) {
  double j = ctx.idle_term;
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const double r = Residual(ctx, k, tau, UplinkEnergyFor(ctx, k, p[k]));
    j += r * r;
  }
  return j + ctx.v * Corollary1Bound(tau, ctx.bound);
}

double J2TauDerivative(double tau, const std::vector<double>& p, const InnerContext& ctx) {
  double d = 0;
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const double r = Residual(ctx, k, tau, UplinkEnergyFor(ctx, k, p[k]));
    d += 2.0 * ctx.epoch_energy[k] / ctx.energy_unit * r;
  }
  return d + ctx.v * Corollary1BoundDerivative(tau, ctx.bound);
}

double TauMax(const InnerContext& ctx, const std::vector<double>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const double slack = ctx.t_max - ctx.t_down - UploadTime(ctx, k, p[k]);
    best = std::min(best, slack / ctx.epoch_latency[k]);
  }
  // Power sitting exactly on p_min(tau) lands a rounding error below tau.
  if (std::isfinite(best) && std::ceil(best) - best < 1e-9) best = std::ceil(best);
  if (!(best >= 1.0)) {
    throw Error(ErrorCode::kInfeasibleLatency, "latency budget leaves no full epoch");
  }
  return best;
}

TauChoice OptimalTau(const InnerContext& ctx, const std::vector<double>& p) {
  const double tmax = TauMax(ctx, p);
  const int top = static_cast<int>(std::floor(tmax));
  TauChoice out;
  auto deriv = [&](double t) { return J2TauDerivative(t, p, ctx); };
  if (deriv(0.0) >= 0) {
    out.which = TauCase::kDerivativeNonNegative;
    out.stationary = 1.0;
    out.tau = 1;
    return out;
  }
  if (deriv(top) <= 0) {
    out.which = TauCase::kClipped;
    out.stationary = top;
    out.tau = top;
    return out;
  }
  // Derivative increases (J2 is convex in tau); bisect its root.
  double lo = 0.0;
  double hi = top;
  for (int it = 0; it < 50 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    (deriv(mid) < 0 ? lo : hi) = mid;
  }
  out.which = TauCase::kInterior;
  out.stationary = 0.5 * (lo + hi);
  const int below = std::max(1, static_cast<int>(std::floor(out.stationary)));
  const int above = std::min(top, below + 1);
  out.tau = J2Objective(above, p, ctx) < J2Objective(below, p, ctx) ? above : below;
  return out;
}

PowerWindow ComputePowerWindow(const InnerContext& ctx, double tau, std::size_t k) {
  const double window = ctx.t_max - ctx.t_down - tau * ctx.epoch_latency[k];
  if (!(window > 0)) throw Error(ErrorCode::kInfeasibleLatency, "no time left to upload");
  PowerWindow pw;
  const double exponent = ctx.bits / (ctx.b_up * window) * std::numbers::ln2;
  pw.p_min = std::expm1(exponent) * ctx.b_up * ctx.n0 / ctx.gain[k];
  if (!(pw.p_min <= ctx.p_max)) {
    throw Error(ErrorCode::kInfeasiblePower, "required uplink power exceeds p_max");
  }
  pw.p_min = std::max(pw.p_min, std::numeric_limits<double>::min());
  pw.e_min = pw.p_min * window;
  pw.e_max = UplinkEnergyFor(ctx, k, ctx.p_max);
  return pw;
}

double PowerForEnergy(double target_energy, double gain, double bits, double b_up, double n0) {
  const double c = bits * n0 * std::numbers::ln2 / (target_energy * gain);
  const double w = LambertWm1(-c * std::exp(-c));
  return -target_energy * b_up * w / (bits * std::numbers::ln2) - b_up * n0 / gain;
}

double OptimalPower(const InnerContext& ctx, double tau, std::size_t k) {
  const PowerWindow pw = ComputePowerWindow(ctx, tau, k);
  const double target = ctx.e_add - ctx.queue[k] - tau * ctx.epoch_energy[k];
  if (target <= 0 || target < pw.e_min) return pw.p_min;
  if (target > pw.e_max) return ctx.p_max;
  return std::clamp(PowerForEnergy(target, ctx.gain[k], ctx.bits, ctx.b_up, ctx.n0), pw.p_min,
                    ctx.p_max);
}

InnerResult AlternateSolve(const InnerContext& ctx, Rng& rng) {
  if (ctx.size() == 0) throw Error(ErrorCode::kInfeasible, "no participants");
  const std::size_t n = ctx.size();
  std::vector<double> p(n);
  try {
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = ComputePowerWindow(ctx, 1.0, k).p_min;
      p[k] = std::uniform_real_distribution<double>(lo, ctx.p_max)(rng);
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::kInfeasible, e.what());
  }

  InnerResult res;
  int tau = static_cast<int>(std::floor(TauMax(ctx, p)));
  double j = J2Objective(tau, p, ctx);
  res.trace.push_back(j);
  for (int it = 1; it <= ctx.max_iters; ++it) {
    res.iterations = it;
    const int next_tau = OptimalTau(ctx, p).tau;
    std::vector<double> next_p(n);
    for (std::size_t k = 0; k < n; ++k) next_p[k] = OptimalPower(ctx, next_tau, k);
    double dp = 0;
    for (std::size_t k = 0; k < n; ++k) dp += (next_p[k] - p[k]) * (next_p[k] - p[k]);
    const double dtau = std::abs(next_tau - tau);
    tau = next_tau;
    p = std::move(next_p);
    j = J2Objective(tau, p, ctx);
    res.trace.push_back(j);
    if (std::sqrt(dp) <= ctx.eps_p && dtau <= ctx.eps_tau) break;
    if (it == ctx.max_iters) res.cap_hit = true;
  }
  if (ctx.tau_scan) {
    const int top = static_cast<int>(std::floor(TauMax(ctx, std::vector<double>(n, ctx.p_max))));
    std::vector<double> q(n);
    for (int t = 1; t <= top; ++t) {
      try {
        for (std::size_t k = 0; k < n; ++k) q[k] = OptimalPower(ctx, t, k);
      } catch (const Error&) {
        break;  // windows only shrink as t grows
      }
      const double jt = J2Objective(t, q, ctx);
      if (jt < j) {
        j = jt;
        tau = t;
        p = q;
        res.scan_improved = true;
      }
    }
    if (res.scan_improved) res.trace.push_back(j);
  }
  res.tau = tau;
  res.p = std::move(p);
  res.j2 = j;
  return res;
}

}  // namespace cre
