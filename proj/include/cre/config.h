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

#ifndef CRE_CONFIG_H_
#define CRE_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cre {

enum class DownlinkRule { kMin, kMax };

// Configuration as written in a config file. Decibel-valued fields are kept
// in their file units here; ValidateConfig converts them.
struct RawConfig {
  // [network]
  int num_clients = 10;
  int num_channels = 3;
  double cell_radius_m = 500.0;
  double carrier_freq_ghz = 2.0;
  DownlinkRule downlink_rule = DownlinkRule::kMin;

  // [radio]
  double p_down_w = 1.0;
  double p_max_w = 0.2;
  double b_down_hz = 20e6;
  double b_up_hz = 1e6;
  double n0_dbm_per_hz = -174.0;
  double antenna_gain_db = 65.0;
  double rician_k = 4.0;
  double rician_sigma = 1.0;

  // [compute]
  double model_bits = 318080.0;
  double cycles_per_sample = 100.0;
  double cpu_freq_hz = 5e8;
  double energy_coeff = 1e-26;
  double e_add_j = 0.00175;
  double t_max_s = 0.01;

  // [learning]
  double eta = 0.1;
  int rounds = 200;
  int tau_fixed = 5;
  int num_classes = 10;
  int feature_dim = 16;
  double class_separation = 3.0;
  double mean_dataset_size = 1000.0;
  double dataset_size_std = 100.0;
  double non_iid_degree = 0.4;
  double test_fraction = 0.1;
  bool running_max_rho_beta = false;

  // [solver]
  double v = 0.1;
  double objective_energy_unit_j = 1e-3;
  double eps_p = 1e-6;
  double eps_tau = 1e-3;
  std::optional<double> sa_temp;  // nullopt: derived from the all-idle value
  double sa_decay = 0.95;
  int sa_iters = 200;
  int inner_max_iters = 100;

  // [run]
  std::uint64_t seed = 1;
};

// Validated configuration in SI units.
struct SystemConfig {
  int num_clients = 0;
  int num_channels = 0;
  double cell_radius_m = 0;
  double carrier_freq_ghz = 0;
  DownlinkRule downlink_rule = DownlinkRule::kMin;

  double p_down = 0;        // W
  double p_max = 0;         // W
  double b_down = 0;        // Hz
  double b_up = 0;          // Hz
  double n0 = 0;            // W/Hz
  double antenna_gain = 0;  // linear
  double rician_k = 0;
  double rician_sigma = 0;

  double model_bits = 0;
  double cycles_per_sample = 0;
  double cpu_freq = 0;  // Hz
  double energy_coeff = 0;
  double e_add = 0;  // J per round
  double t_max = 0;  // s

  double eta = 0;
  int rounds = 0;
  int tau_fixed = 1;
  int num_classes = 0;
  int feature_dim = 0;
  double class_separation = 0;
  double mean_dataset_size = 0;
  double dataset_size_std = 0;
  double non_iid_degree = 0;
  double test_fraction = 0;
  bool running_max_rho_beta = false;

  double v = 0;
  // Energies enter the drift-plus-penalty objective in multiples of this
  // many joules, which fixes the scale V trades against.
  double objective_energy_unit = 1e-3;
  double eps_p = 0;
  double eps_tau = 0;
  std::optional<double> sa_temp;
  double sa_decay = 0;
  int sa_iters = 0;
  int inner_max_iters = 0;

  std::uint64_t seed = 0;
};

double DbToLinear(double db);
double DbmPerHzToWattPerHz(double dbm_per_hz);

// Converts decibel fields and checks every invariant. Throws cre::Error with
// kNonPositiveParameter, kInvalidFraction or kDegenerateTopology.
SystemConfig ValidateConfig(const RawConfig& raw);

// INI-style file with [network], [radio], [compute], [learning], [solver]
// and [run] sections. Unknown sections or keys are rejected with kUnknownKey.
RawConfig ParseConfig(std::istream& in);
RawConfig LoadConfigFile(const std::string& path);
void WriteConfig(std::ostream& out, const RawConfig& raw);

// Stable 64-bit FNV-1a hash of the canonical serialization.
std::uint64_t ConfigHash(const RawConfig& raw);

}  // namespace cre

#endif  // CRE_CONFIG_H_
