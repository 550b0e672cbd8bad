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

#include "cre/estimator.h"

#include <algorithm>
#include <cmath>

#include "cre/error.h"
#include "cre/kernels.h"

namespace cre {
namespace {

template <typename Num>
double MaxRatio(std::span<const ParticipantObservation> obs, Num numerator) {
  double best = -1.0;
  for (const auto& o : obs) {
    if (o.model_diff_norm <= kNumericEps) continue;
    best = std::max(best, numerator(o) / o.model_diff_norm);
  }
  if (best < 0) throw Error(ErrorCode::kDegenerateStep, "no participant moved");
  return best;
}

void CheckStep(double eta, double beta) {
  if (eta * beta >= 1.0) {
    throw Error(ErrorCode::kStepSizeTooLarge, "eta * beta must stay below 1");
  }
}

}  // namespace

double EstimateRho(std::span<const ParticipantObservation> obs) {
  return MaxRatio(obs, [](const auto& o) { return std::abs(o.loss_local - o.loss_global); });
}

double EstimateBeta(std::span<const ParticipantObservation> obs) {
  return MaxRatio(obs, [](const auto& o) { return o.grad_diff_norm; });
}

DeltaEstimate EstimateDelta(const std::vector<std::vector<double>>& grads_local,
                            std::span<const double> grad_global, double prev_bias) {
  DeltaEstimate out;
  const double g_norm = std::sqrt(kernels::SquaredNorm(grad_global));
  double bias = prev_bias;
  for (const auto& gi : grads_local) {
    bias = std::max(bias, std::abs(std::sqrt(kernels::SquaredNorm(gi)) - g_norm));
  }
  out.bias_running_max = bias;
  out.delta.reserve(grads_local.size());
  std::vector<double> scaled;
  for (const auto& gi : grads_local) {
    const double gi_norm = std::sqrt(kernels::SquaredNorm(gi));
    double term;
    if (gi_norm < kNumericEps) {
      // Supremum over directions of the normalized term.
      term = g_norm;
    } else {
      scaled.assign(gi.begin(), gi.end());
      for (double& v : scaled) v *= g_norm / gi_norm;
      term = std::sqrt(kernels::SquaredDistance(scaled, grad_global));
    }
    out.delta.push_back(bias + term);
  }
  return out;
}

Coefficients ComputeCoefficients(std::span<const int> a, std::span<const double> w,
                                 std::span<const double> w_tilde,
                                 std::span<const double> delta) {
  Coefficients c;
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.a1 += (w_tilde[i] - w_tilde[i] * w_tilde[i]) * delta[i];
  }
  c.a1 *= 2.0;
  double aw = 0;
  for (std::size_t i = 0; i < w.size(); ++i) aw += a[i] * w[i];
  c.a2 = 2.0 * std::max(0.0, 1.0 - aw) * CoefficientA2Unscaled(a, w, w_tilde, delta);
  return c;
}

double CoefficientA2Unscaled(std::span<const int> a, std::span<const double> w,
                             std::span<const double> w_tilde, std::span<const double> delta) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += (w_tilde[i] + w[i] - 2.0 * a[i] * w[i]) * delta[i] * delta[i];
  }
  return s;
}

double CoefficientA3(double eta, double beta, double a2, double f_gap) {
  CheckStep(eta, beta);
  return (eta - eta * eta * beta) * std::sqrt(2.0 * beta * a2 * std::max(f_gap, 0.0)) +
         eta * eta * beta * a2 / 2.0;
}

double Theorem1Bound(double m, double eta, double beta, double a1) {
  const double x = eta * beta;
  // pow(1+x, m) - x m - 1 loses everything to cancellation for small x m.
  const double growth = std::expm1(m * std::log1p(x)) - x * m;
  return a1 / beta * std::max(growth, 0.0);
}

double Lemma2Bound(double m, double eta, double beta, std::span<const double> w_tilde,
                   std::span<const double> delta, int i) {
  double c = (1.0 - w_tilde[i]) * delta[i];
  for (std::size_t j = 0; j < w_tilde.size(); ++j) {
    if (static_cast<int>(j) != i) c += w_tilde[j] * delta[j];
  }
  return c / beta * std::expm1(m * std::log1p(eta * beta));
}

double Corollary1Bound(double tau, const BoundInputs& in) {
  CheckStep(in.eta, in.beta);
  const double x = in.eta * in.beta;
  const double c = (2.0 * in.eta - in.eta * in.eta * in.beta) / (in.b1 * in.b1);
  // No clamp here: tau is continuous and the growth term dips below zero on
  // (0, 1). Clamping would put a kink at tau = 1 that the derivative ignores.
  const double growth = std::expm1(tau * std::log1p(x)) - x * tau;
  return in.rho * in.a1 / in.beta * growth + tau * in.a3 + 2.0 / (c * tau + 2.0 / in.f_gap);
}

double Corollary1BoundDerivative(double tau, const BoundInputs& in) {
  CheckStep(in.eta, in.beta);
  const double x = in.eta * in.beta;
  const double c = (2.0 * in.eta - in.eta * in.eta * in.beta) / (in.b1 * in.b1);
  const double denom = c * tau + 2.0 / in.f_gap;
  return in.rho * in.a1 / in.beta * (std::log1p(x) * std::pow(1.0 + x, tau) - x) + in.a3 -
         2.0 * c / (denom * denom);
}

double Corollary1BoundSecondDerivative(double tau, const BoundInputs& in) {
  const double x = in.eta * in.beta;
  const double l = std::log1p(x);
  const double c = (2.0 * in.eta - in.eta * in.eta * in.beta) / (in.b1 * in.b1);
  const double denom = c * tau + 2.0 / in.f_gap;
  return in.rho * in.a1 / in.beta * l * l * std::pow(1.0 + x, tau) +
         4.0 * c * c / (denom * denom * denom);
}

double Theorem2Bound(double tau, double eta, double beta, double a3, double f_gap, double b1) {
  CheckStep(eta, beta);
  if (tau <= 0) return f_gap;
  const double k = 4.0 * eta - 2.0 * eta * eta * beta;
  const double lin = 4.0 * tau / f_gap + k * tau * tau / (b1 * b1);
  const double x = a3 * lin;
  // 2 tau A3 / (sqrt(1 + x) - 1) rewritten as 2 tau (1 + sqrt(1 + x)) / lin.
  return 2.0 * tau * (1.0 + std::sqrt(1.0 + x)) / lin;
}

ModelPropertyEstimates RefreshEstimates(const RoundRecord& rec,
                                        const ModelPropertyEstimates& prev,
                                        bool running_max_rho_beta) {
  ModelPropertyEstimates next = prev;
  if (rec.participants.empty()) return next;
  try {
    const double rho = EstimateRho(rec.participants);
    next.rho_hat = running_max_rho_beta ? std::max(prev.rho_hat, rho) : rho;
  } catch (const Error&) {
  }
  try {
    const double beta = EstimateBeta(rec.participants);
    next.beta_hat = running_max_rho_beta ? std::max(prev.beta_hat, beta) : beta;
  } catch (const Error&) {
  }
  // A zero ratio would make the bound's 1/beta blow up.
  if (!(next.rho_hat > 0)) next.rho_hat = prev.rho_hat;
  if (!(next.beta_hat > 0)) next.beta_hat = prev.beta_hat;
  if (!rec.grads_local.empty()) {
    DeltaEstimate d = EstimateDelta(rec.grads_local, rec.grad_global, prev.bias_running_max);
    next.delta_hat = std::move(d.delta);
    next.bias_running_max = d.bias_running_max;
  }
  return next;
}

}  // namespace cre
