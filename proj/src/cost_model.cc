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

#include "cre/cost_model.h"

#include <algorithm>

namespace cre {

double EpochLatency(const SystemConfig& cfg, double dataset_size) {
  return cfg.cycles_per_sample * dataset_size / cfg.cpu_freq;
}

double EpochEnergy(const SystemConfig& cfg, double dataset_size) {
  return cfg.energy_coeff * cfg.cpu_freq * cfg.cpu_freq * cfg.cycles_per_sample * dataset_size;
}

double RoundEnergyBalance(double e_add, int a, int tau, double epoch_energy, double e_up) {
  return e_add - a * (tau * epoch_energy + e_up);
}

double UpdateVirtualQueue(double z, double q) { return std::max(z - q, 0.0); }

void EnergyQueueState::Apply(std::span<const double> spent, double e_add) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    // Idle clients report zero spend, so q reduces to E_add for them.
    z[i] = UpdateVirtualQueue(z[i], e_add - spent[i]);
    consumed[i] += spent[i];
    budget[i] += e_add;
  }
}

double EnergyQueueState::MaxZ() const {
  return z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
}

}  // namespace cre
