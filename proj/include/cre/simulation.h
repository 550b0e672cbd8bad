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

// The per-round pipeline: channels, schedule, local training, aggregation,
// energy queues and estimate refresh.

#ifndef CRE_SIMULATION_H_
#define CRE_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cre/config.h"
#include "cre/cost_model.h"
#include "cre/estimator.h"
#include "cre/fl_engine.h"
#include "cre/outer_solver.h"
#include "cre/rng.h"
#include "cre/types.h"

namespace cre {

enum class SchedulerKind { kCre, kRandom, kRoundRobin };

std::string_view SchedulerName(SchedulerKind kind);
std::optional<SchedulerKind> ParseScheduler(std::string_view name);
// "cre, random, round_robin"
std::string SchedulerNameList();

struct ScheduleDecision {
  RoundSolution solution;
  double objective = std::numeric_limits<double>::quiet_NaN();
  bool inner_cap_hit = false;
  bool fallback = false;
};

using Scheduler = std::function<ScheduleDecision(const RoundContext&, int round)>;

Scheduler MakeScheduler(SchedulerKind kind, const SystemConfig& cfg, std::uint64_t seed,
                        std::uint64_t replicate);

// Static part of a run: who is where, who holds what data, and the
// centralized optimum used for F* and B1.
struct World {
  std::vector<ClientProfile> profiles;
  std::vector<double> large_scale;
  FederatedData data;
  ModelVector theta0;
  CentralizedOptimum optimum;
};

class Simulation {
 public:
  Simulation(const SystemConfig& cfg, World world, Scheduler scheduler, std::uint64_t seed,
             std::uint64_t replicate);

  RoundMetrics RunRound();

  int round() const { return round_; }
  const ModelVector& theta() const { return theta_; }
  const EnergyQueueState& queues() const { return queues_; }
  const ModelPropertyEstimates& estimates() const { return estimates_; }
  const World& world() const { return world_; }

 private:
  SystemConfig cfg_;
  World world_;
  Scheduler scheduler_;
  Rng channel_rng_;
  Rng inner_rng_;
  std::vector<double> epoch_energy_;
  std::vector<double> epoch_latency_;
  ModelVector theta_;
  double loss_ = 0;
  EnergyQueueState queues_;
  ModelPropertyEstimates estimates_;
  bool estimates_ready_ = false;
  double cumulative_energy_ = 0;
  int round_ = 0;
};

}  // namespace cre

#endif  // CRE_SIMULATION_H_
