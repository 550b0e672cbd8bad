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

// Wireless link model: UMa large-scale attenuation, Rician small-scale
// fading, Shannon rates and the latency/energy of moving the model.

#ifndef CRE_CHANNEL_H_
#define CRE_CHANNEL_H_

#include <span>
#include <vector>

#include "cre/config.h"
#include "cre/rng.h"

namespace cre {

// Realized gains for one round. h_up is client-major: h_up[i * C + c].
struct LinkState {
  int round = 0;
  int channels = 0;
  std::vector<double> h_down;
  std::vector<double> h_up;
  double v_down = 0;  // bps

  double UplinkGain(int client, int channel) const {
    return h_up[static_cast<std::size_t>(client) * channels + channel];
  }
};

// 28 + 22 log10(d) + 20 log10(f_GHz), in dB.
double PathLossDb(double distance_m, double carrier_ghz);
double LargeScaleGain(double distance_m, double carrier_ghz);

// Squared envelope of a Rice(noncentrality k, scale sigma) variate.
double SampleSmallScale(Rng& rng, double k, double sigma);

// B log2(1 + p h / (B N0)).
double ShannonRate(double bandwidth_hz, double power_w, double gain, double n0);
double UplinkRate(double p, double h, const SystemConfig& cfg);
// Broadcast rate over all clients' downlink gains; min or max per cfg.
double DownlinkRate(std::span<const double> h_down, const SystemConfig& cfg);

// bits / rate. Throws kZeroRate when rate is zero and bits are not.
double TransmissionLatency(double bits, double rate_bps);
double UplinkEnergy(double p, double t);
// Energy of pushing cfg.model_bits at power p over gain h.
double UplinkEnergyAtPower(double p, double h, const SystemConfig& cfg);

// Draws fresh small-scale fading for every client and channel on top of
// the fixed large-scale gains.
LinkState DrawLinks(Rng& rng, std::span<const double> large_scale, const SystemConfig& cfg,
                    int round);

}  // namespace cre

#endif  // CRE_CHANNEL_H_
