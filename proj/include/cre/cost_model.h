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

// Local compute cost and per-round energy bookkeeping.

#ifndef CRE_COST_MODEL_H_
#define CRE_COST_MODEL_H_

#include <span>
#include <vector>

#include "cre/config.h"

namespace cre {

// b D / f seconds per full-batch epoch.
double EpochLatency(const SystemConfig& cfg, double dataset_size);
// alpha f^2 b D joules per full-batch epoch.
double EpochEnergy(const SystemConfig& cfg, double dataset_size);

// Net energy input of one round, E_add - a (tau E + e_up). May be negative.
double RoundEnergyBalance(double e_add, int a, int tau, double epoch_energy, double e_up);

// max(Z - q, 0)
double UpdateVirtualQueue(double z, double q);

struct EnergyQueueState {
  std::vector<double> z;
  std::vector<double> consumed;
  std::vector<double> budget;

  explicit EnergyQueueState(int clients = 0)
      : z(clients, 0.0), consumed(clients, 0.0), budget(clients, 0.0) {}

  // spent[i] is the realized energy of client i this round (0 when idle).
  void Apply(std::span<const double> spent, double e_add);
  double MaxZ() const;
};

}  // namespace cre

#endif  // CRE_COST_MODEL_H_
