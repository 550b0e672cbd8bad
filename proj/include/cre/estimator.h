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

// Online estimates of the smoothness constants and the loss-bound
// evaluations that drive the scheduler's penalty term.

#ifndef CRE_ESTIMATOR_H_
#define CRE_ESTIMATOR_H_

#include <span>
#include <vector>

namespace cre {

struct ModelPropertyEstimates {
  double rho_hat = 1.0;
  double beta_hat = 1.0;
  std::vector<double> delta_hat;
  double f_star_est = 0.0;
  double b1_est = 1.0;
  double bias_running_max = 0.0;
};

// Scalars observed for one participant of the previous round: its final
// local model theta_i against the aggregated model theta.
struct ParticipantObservation {
  double loss_local = 0;      // F_i(theta_i)
  double loss_global = 0;     // F_i(theta)
  double grad_diff_norm = 0;  // |grad F_i(theta_i) - grad F_i(theta)|
  double model_diff_norm = 0; // |theta_i - theta|
};

// Everything refresh needs from the previous round. grads_local holds every
// client's gradient at the current global model, grad_global the global one.
struct RoundRecord {
  std::vector<ParticipantObservation> participants;
  std::vector<std::vector<double>> grads_local;
  std::vector<double> grad_global;
};

inline constexpr double kNumericEps = 1e-12;

// Max ratio over participants. Throw kDegenerateStep when no participant
// moved further than kNumericEps.
double EstimateRho(std::span<const ParticipantObservation> obs);
double EstimateBeta(std::span<const ParticipantObservation> obs);

struct DeltaEstimate {
  std::vector<double> delta;
  double bias_running_max = 0;
};

// delta_i = bias + |(|g| / |g_i|) g_i - g|, with the bias a running max of
// ||g_i| - |g|| over all clients and rounds.
DeltaEstimate EstimateDelta(const std::vector<std::vector<double>>& grads_local,
                            std::span<const double> grad_global, double prev_bias);

struct Coefficients {
  double a1 = 0;
  double a2 = 0;
};

Coefficients ComputeCoefficients(std::span<const int> a, std::span<const double> w,
                                 std::span<const double> w_tilde,
                                 std::span<const double> delta);
// Variant without the 2(1 - sum a w) prefactor, as used inside the proofs.
double CoefficientA2Unscaled(std::span<const int> a, std::span<const double> w,
                             std::span<const double> w_tilde, std::span<const double> delta);
// Throws kStepSizeTooLarge when eta * beta >= 1.
double CoefficientA3(double eta, double beta, double a2, double f_gap);

struct BoundInputs {
  double eta = 0;
  double rho = 0;
  double beta = 0;
  double a1 = 0;
  double a3 = 0;
  double f_gap = 0;
  double b1 = 1;
};

double Theorem1Bound(double m, double eta, double beta, double a1);
double Lemma2Bound(double m, double eta, double beta, std::span<const double> w_tilde,
                   std::span<const double> delta, int i);
// Three-term bound on F(theta^n) - F* as a function of the epoch count.
double Corollary1Bound(double tau, const BoundInputs& in);
double Corollary1BoundDerivative(double tau, const BoundInputs& in);
double Corollary1BoundSecondDerivative(double tau, const BoundInputs& in);
// Radical form; the A3 -> 0 limit is handled without a 0/0.
double Theorem2Bound(double tau, double eta, double beta, double a3, double f_gap, double b1);

// Per-round refresh. No participants leaves everything unchanged; degenerate
// ratio sets keep the previous rho/beta.
ModelPropertyEstimates RefreshEstimates(const RoundRecord& rec,
                                        const ModelPropertyEstimates& prev,
                                        bool running_max_rho_beta);

inline constexpr double kFGapFloor = 1e-8;

}  // namespace cre

#endif  // CRE_ESTIMATOR_H_
