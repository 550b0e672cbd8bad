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
#include <vector>

#include "cre/error.h"
#include "cre/estimator.h"
#include "doctest.h"
#include "test_util.h"

using cre::testing::RelClose;

namespace {
cre::ParticipantObservation Obs(double dloss, double dgrad, double dtheta) {
  cre::ParticipantObservation o;
  o.loss_local = 1.0;
  o.loss_global = 1.0 + dloss;
  o.grad_diff_norm = dgrad;
  o.model_diff_norm = dtheta;
  return o;
}
}  // namespace

TEST_CASE("rho and beta are per-round maxima of ratios") {
  const std::vector<cre::ParticipantObservation> one{Obs(0.2, 0.4, 0.1)};
  CHECK(RelClose(cre::EstimateRho(one), 2.0, 1e-14));
  CHECK(RelClose(cre::EstimateBeta(one), 4.0, 1e-14));

  const std::vector<cre::ParticipantObservation> two{Obs(0.15, 0.05, 0.1), Obs(0.3, 0.25, 0.1)};
  CHECK(RelClose(cre::EstimateRho(two), 3.0, 1e-14));
  CHECK(RelClose(cre::EstimateBeta(two), 2.5, 1e-14));

  const std::vector<cre::ParticipantObservation> stuck{Obs(0.0, 0.0, 0.0)};
  CHECK_THROWS_AS(cre::EstimateRho(stuck), cre::Error);
  CHECK_THROWS_AS(cre::EstimateBeta(stuck), cre::Error);
}

TEST_CASE("delta estimate") {
  const std::vector<double> g{1.0, 0.0};
  auto d = cre::EstimateDelta({{1.0, 0.0}, {1.0, 0.0}}, g, 0.0);
  CHECK(d.delta == std::vector<double>{0.0, 0.0});

  // bias |2 - 1| = 1, normalized term |(1,0) - (0,1)| = sqrt 2
  d = cre::EstimateDelta({{0.0, 2.0}}, g, 0.0);
  CHECK(RelClose(d.delta[0], 1.0 + std::sqrt(2.0), 1e-14));
  CHECK(d.bias_running_max == 1.0);

  // the bias term only grows
  double bias = 0.0;
  std::vector<double> seen;
  for (double b : {0.5, 1.2, 0.9}) {
    bias = cre::EstimateDelta({{1.0 + b, 0.0}}, g, bias).bias_running_max;
    seen.push_back(bias);
  }
  CHECK(RelClose(seen[0], 0.5, 1e-14));
  CHECK(RelClose(seen[1], 1.2, 1e-14));
  CHECK(RelClose(seen[2], 1.2, 1e-14));
}

TEST_CASE("coefficients") {
  const std::vector<int> both{1, 1};
  const std::vector<double> half{0.5, 0.5};
  const std::vector<double> ones{1.0, 1.0};
  const auto c = cre::ComputeCoefficients(both, half, half, ones);
  CHECK(RelClose(c.a1, 1.0, 1e-14));
  CHECK(c.a2 == 0.0);

  const std::vector<int> first{1, 0};
  const std::vector<double> solo{1.0, 0.0};
  CHECK(cre::ComputeCoefficients(first, half, solo, ones).a1 == 0.0);
  CHECK(cre::ComputeCoefficients(first, half, solo, ones).a2 > 0.0);

  CHECK(cre::CoefficientA3(0.1, 1.0, 0.0, 1.0) == 0.0);
  CHECK(RelClose(cre::CoefficientA3(0.1, 1.0, 2.0, 1.0), 0.19, 1e-14));
  CHECK_THROWS_AS(cre::CoefficientA3(0.5, 2.0, 1.0, 1.0), cre::Error);
}

TEST_CASE("parameter-gap bounds") {
  CHECK(cre::Theorem1Bound(0, 0.1, 1.0, 1.0) == 0.0);
  CHECK(cre::Theorem1Bound(5, 0.1, 1.0, 0.0) == 0.0);
  CHECK(RelClose(cre::Theorem1Bound(2, 0.1, 1.0, 1.0), 0.01, 1e-12));

  const std::vector<double> w{0.5, 0.5};
  const std::vector<double> delta{2.0, 2.0};  // C_0 = 0.5*2 + 0.5*2 = 2
  CHECK(cre::Lemma2Bound(0, 0.1, 1.0, w, delta, 0) == 0.0);
  CHECK(RelClose(cre::Lemma2Bound(1, 0.1, 1.0, w, delta, 0), 0.2, 1e-12));
  const std::vector<double> sole{1.0, 0.0};
  CHECK(cre::Lemma2Bound(3, 0.1, 1.0, sole, delta, 0) == 0.0);
}

namespace {
// Plain transcription of the three-term loss bound.
double DirectBound(double tau, const cre::BoundInputs& in) {
  const double x = in.eta * in.beta;
  const double c = (2 * in.eta - in.eta * in.eta * in.beta) / (in.b1 * in.b1);
  return in.rho * in.a1 / in.beta * (std::pow(1 + x, tau) - x * tau - 1) + tau * in.a3 +
         2 / (c * tau + 2 / in.f_gap);
}
}  // namespace

TEST_CASE("loss bound") {
  cre::BoundInputs in{0.1, 1.0, 1.0, 1.0, 0.1, 1.0, 1.0};
  CHECK(cre::Corollary1Bound(0.0, in) == 1.0);
  // First term vanishes at one epoch: 0 + 0.1 + 2 / 2.19.
  CHECK(RelClose(cre::Corollary1Bound(1.0, in), 0.1 + 2.0 / 2.19, 1e-13));
  CHECK(RelClose(cre::Corollary1Bound(1.0, in), 1.0132420091324201, 1e-13));
  for (double t : {0.5, 2.0, 7.0, 30.0}) CHECK(RelClose(cre::Corollary1Bound(t, in), DirectBound(t, in), 1e-12));

  cre::BoundInputs flat = in;
  flat.a1 = 0;
  flat.a3 = 0;
  double prev = cre::Corollary1Bound(0.0, flat);
  for (int t = 1; t < 200; ++t) {
    const double b = cre::Corollary1Bound(t, flat);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 0.1);

  const double h = 1e-5;
  for (double t : {0.5, 3.0, 12.0}) {
    const double fd = (cre::Corollary1Bound(t + h, in) - cre::Corollary1Bound(t - h, in)) / (2 * h);
    CHECK(RelClose(cre::Corollary1BoundDerivative(t, in), fd, 1e-7));
    const double fd2 = (cre::Corollary1BoundDerivative(t + h, in) -
                        cre::Corollary1BoundDerivative(t - h, in)) / (2 * h);
    CHECK(RelClose(cre::Corollary1BoundSecondDerivative(t, in), fd2, 1e-6));
  }
  in.beta = 10.0;
  CHECK_THROWS_AS(cre::Corollary1Bound(1.0, in), cre::Error);
}

TEST_CASE("radical-form loss bound") {
  CHECK(cre::Theorem2Bound(0.0, 0.1, 1.0, 0.19, 1.0, 1.0) == 1.0);
  // Raw form 2 tau A3 / (sqrt(1 + A3 L) - 1), L = 4 tau / F + (4 eta - 2 eta^2 beta) tau^2 / B1^2.
  const double tau = 4, a3 = 0.19;
  const double lin = 4 * tau + (0.4 - 0.02) * tau * tau;
  const double raw = 2 * tau * a3 / (std::sqrt(1 + a3 * lin) - 1);
  CHECK(RelClose(cre::Theorem2Bound(tau, 0.1, 1.0, a3, 1.0, 1.0), raw, 1e-13));
  CHECK(RelClose(raw, 1.188151, 1e-6));

  // A3 -> 0 gives the relaxed third term of the three-term bound.
  const double limit = 2.0 / ((0.2 - 0.01) * tau + 2.0);
  CHECK(RelClose(cre::Theorem2Bound(tau, 0.1, 1.0, 0.0, 1.0, 1.0), limit, 1e-14));
  CHECK(RelClose(cre::Theorem2Bound(tau, 0.1, 1.0, 1e-9, 1.0, 1.0), limit, 1e-8));
}

TEST_CASE("refresh keeps per-round maxima and falls back on degenerate rounds") {
  cre::ModelPropertyEstimates est;
  est.delta_hat.assign(1, 0.0);
  std::vector<double> rho_seen;
  for (double ratio : {1.0, 3.0, 2.0}) {
    cre::RoundRecord rec;
    rec.participants.push_back(Obs(0.1 * ratio, 0.1, 0.1));
    rec.grads_local.push_back({1.0, 0.0});
    rec.grad_global = {1.0, 0.0};
    est = cre::RefreshEstimates(rec, est, false);
    rho_seen.push_back(est.rho_hat);
  }
  CHECK(RelClose(rho_seen[0], 1.0, 1e-12));
  CHECK(RelClose(rho_seen[1], 3.0, 1e-12));
  CHECK(RelClose(rho_seen[2], 2.0, 1e-12));

  const cre::ModelPropertyEstimates before = est;
  est = cre::RefreshEstimates(cre::RoundRecord{}, est, false);
  CHECK(est.rho_hat == before.rho_hat);
  CHECK(est.beta_hat == before.beta_hat);

  cre::RoundRecord stuck;
  stuck.participants.push_back(Obs(0.0, 0.0, 0.0));
  stuck.grads_local.push_back({1.0, 0.0});
  stuck.grad_global = {1.0, 0.0};
  est = cre::RefreshEstimates(stuck, before, false);
  CHECK(est.rho_hat == before.rho_hat);
}
