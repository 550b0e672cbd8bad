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

// Combinatorial schedule search (who uploads on which channel) plus the
// random and round-robin baselines.

#ifndef CRE_OUTER_SOLVER_H_
#define CRE_OUTER_SOLVER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cre/channel.h"
#include "cre/config.h"
#include "cre/estimator.h"
#include "cre/inner_solver.h"
#include "cre/rng.h"
#include "cre/types.h"

namespace cre {

// What the scheduler sees at the start of a round.
struct RoundContext {
  const SystemConfig* cfg = nullptr;
  std::span<const ClientProfile> profiles;
  std::vector<double> epoch_energy;
  std::vector<double> epoch_latency;
  std::vector<double> queue;
  const LinkState* links = nullptr;
  double t_down = 0;
  ModelPropertyEstimates estimates;
  double f_gap = 1.0;
  // False until a round with participants has produced estimates.
  bool estimates_ready = false;
  // Seeds the per-candidate power initialization; the draw depends only on
  // this value and the candidate, never on search order.
  std::uint64_t inner_seed = 0;

  int clients() const { return static_cast<int>(profiles.size()); }
};

// Bound inputs for participation vector a (A1, A3 depend on it).
BoundInputs BoundInputsFor(const RoundContext& rc, std::span<const int> a);

// Inner problem for allocation r. Requires at least one participant.
InnerContext BuildInnerContext(const RoundContext& rc, const ChannelMatrix& r);

// Full per-round objective: sum_i (q_i^2 - 2 Z_i q_i) + V * bound(tau), with
// energies in objective units. An all-idle solution uses tau = 0.
double DriftPlusPenalty(const RoundContext& rc, const RoundSolution& s);

struct CandidateSolution {
  ChannelMatrix r;
  std::vector<int> a;
  int tau = 0;
  std::vector<double> p;  // per client, zero when idle
  double j2 = 0;
  double j = 0;
  bool feasible = true;
  bool inner_cap_hit = false;

  RoundSolution ToRoundSolution() const;
};

// Solves the inner problem for r and evaluates J. Infeasible allocations
// come back with j = +inf.
CandidateSolution EvaluateCandidate(const RoundContext& rc, const ChannelMatrix& r);

// r itself plus every single-bit flip that keeps row and column sums <= 1.
std::vector<ChannelMatrix> Neighborhood(const ChannelMatrix& r);

struct AnnealingOptions {
  double initial_temp = 0;  // <= 0: from J(all idle) and its neighbors
  double decay = 0.95;
  int iters = 200;
};

struct AnnealingResult {
  CandidateSolution best;
  std::vector<double> current_j;  // J of the accepted state after each step
  std::vector<double> best_j;
  std::vector<double> temperature;
  int inner_solves = 0;
};

AnnealingResult SimulatedAnnealing(const RoundContext& rc, const AnnealingOptions& opt,
                                   Rng& rng);

// Fixed-rule schedules. Clients that cannot finish one epoch at p_max are
// left out; tau is tau_fixed clipped to what every scheduled client allows.
RoundSolution ScheduleRandom(const RoundContext& rc, int tau_fixed, Rng& rng);
// round is 1-based; round r takes clients (r-1)C .. (r-1)C + C-1 mod U.
RoundSolution ScheduleRoundRobin(const RoundContext& rc, int round, int tau_fixed);

}  // namespace cre

#endif  // CRE_OUTER_SOLVER_H_
