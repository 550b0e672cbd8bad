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

// Continuous subproblem at a fixed schedule: local epoch count and uplink
// powers of the participating clients.

#ifndef CRE_INNER_SOLVER_H_
#define CRE_INNER_SOLVER_H_

#include <vector>

#include "cre/estimator.h"
#include "cre/rng.h"

namespace cre {

// All vectors are indexed by participant slot, not client id.
struct InnerContext {
  std::vector<int> clients;
  std::vector<double> epoch_energy;   // E_i, J
  std::vector<double> epoch_latency;  // T_i, s
  std::vector<double> queue;          // Z_i, J
  std::vector<double> gain;           // gain on the allocated channel
  // Sum over idle clients of E_add^2 - 2 Z E_add, already in objective units.
  double idle_term = 0;
  double t_down = 0;
  BoundInputs bound;

  double v = 0;
  double e_add = 0;
  double t_max = 0;
  double bits = 0;
  double b_up = 0;
  double n0 = 0;
  double p_max = 0;
  // Joules per objective energy unit.
  double energy_unit = 1.0;
  int max_iters = 100;
  double eps_p = 1e-6;
  double eps_tau = 1e-3;
  // Finish with a scan over integer tau using the closed-form power step.
  bool tau_scan = true;

  std::size_t size() const { return clients.size(); }
};

double UplinkEnergyFor(const InnerContext& ctx, std::size_t k, double p);

double J2Objective(double tau, const std::vector<double>& p, const InnerContext& ctx);
double J2TauDerivative(double tau, const std::vector<double>& p, const InnerContext& ctx);

// Largest continuous epoch count the latency budget admits at powers p.
// Throws kInfeasibleLatency when it is below one.
double TauMax(const InnerContext& ctx, const std::vector<double>& p);

enum class TauCase { kDerivativeNonNegative, kInterior, kClipped };

struct TauChoice {
  TauCase which = TauCase::kDerivativeNonNegative;
  double stationary = 1.0;  // tau' when a root exists below tau_max
  int tau = 1;              // integer choice
};

// Three-case rule on the derivative at zero, followed by picking the better
// of the two integers around the continuous optimum inside [1, floor(tau_max)].
TauChoice OptimalTau(const InnerContext& ctx, const std::vector<double>& p);

struct PowerWindow {
  double p_min = 0;
  double e_min = 0;
  double e_max = 0;
};

// Throws kInfeasibleLatency for a closed latency window and kInfeasiblePower
// when p_min exceeds p_max.
PowerWindow ComputePowerWindow(const InnerContext& ctx, double tau, std::size_t k);

// Closed-form power inverse: the p whose upload energy equals target_energy.
double PowerForEnergy(double target_energy, double gain, double bits, double b_up, double n0);

double OptimalPower(const InnerContext& ctx, double tau, std::size_t k);

struct InnerResult {
  int tau = 0;
  std::vector<double> p;
  double j2 = 0;
  int iterations = 0;
  bool cap_hit = false;
  std::vector<double> trace;  // J2 after each tau/power pair
  bool scan_improved = false;
};

// Alternating closed-form updates from a random feasible start. Throws
// kInfeasible when no participant set member can finish one epoch in time.
//
// The alternation can stall where the current upload time fills the latency
// budget: tau cannot grow at that power, and the power step only returns
// powers that fit the current tau. Since the power step is exact for a fixed
// tau, a closing scan over integer tau makes the result exact; it only ever
// lowers J2.
InnerResult AlternateSolve(const InnerContext& ctx, Rng& rng);

}  // namespace cre

#endif  // CRE_INNER_SOLVER_H_
