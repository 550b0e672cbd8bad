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

#include "cre/channel.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cre/error.h"

namespace cre {

double PathLossDb(double distance_m, double carrier_ghz) {
  return 28.0 + 22.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz);
}

double LargeScaleGain(double distance_m, double carrier_ghz) {
  return std::pow(10.0, -PathLossDb(distance_m, carrier_ghz) / 10.0);
}

double SampleSmallScale(Rng& rng, double k, double sigma) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double x = k + sigma * n01(rng);
  const double y = sigma * n01(rng);
  const double g = x * x + y * y;
  // An exact zero is measure-zero but would break log/rate code downstream.
  return g > 0 ? g : std::numeric_limits<double>::min();
}

double ShannonRate(double bandwidth_hz, double power_w, double gain, double n0) {
  if (power_w <= 0) return 0.0;
  const double snr = power_w * gain / (bandwidth_hz * n0);
  return bandwidth_hz * std::log1p(snr) / std::numbers::ln2;
}

double UplinkRate(double p, double h, const SystemConfig& cfg) {
  return ShannonRate(cfg.b_up, p, h, cfg.n0);
}

double DownlinkRate(std::span<const double> h_down, const SystemConfig& cfg) {
  double out = cfg.downlink_rule == DownlinkRule::kMin
                   ? std::numeric_limits<double>::infinity()
                   : 0.0;
  for (double h : h_down) {
    const double r = ShannonRate(cfg.b_down, cfg.p_down, h, cfg.n0);
    out = cfg.downlink_rule == DownlinkRule::kMin ? std::min(out, r) : std::max(out, r);
  }
  return h_down.empty() ? 0.0 : out;
}

double TransmissionLatency(double bits, double rate_bps) {
  if (bits <= 0) return 0.0;
  if (!(rate_bps > 0)) throw Error(ErrorCode::kZeroRate, "cannot send bits at zero rate");
  return bits / rate_bps;
}

double UplinkEnergy(double p, double t) { return p * t; }

double UplinkEnergyAtPower(double p, double h, const SystemConfig& cfg) {
  return UplinkEnergy(p, TransmissionLatency(cfg.model_bits, UplinkRate(p, h, cfg)));
}

LinkState DrawLinks(Rng& rng, std::span<const double> large_scale, const SystemConfig& cfg,
                    int round) {
  const int u = static_cast<int>(large_scale.size());
  const int c = cfg.num_channels;
  LinkState s;
  s.round = round;
  s.channels = c;
  s.h_down.resize(u);
  s.h_up.resize(static_cast<std::size_t>(u) * c);
  for (int i = 0; i < u; ++i) {
    const double base = large_scale[i] * cfg.antenna_gain;
    s.h_down[i] = base * SampleSmallScale(rng, cfg.rician_k, cfg.rician_sigma);
    for (int ch = 0; ch < c; ++ch) {
      s.h_up[static_cast<std::size_t>(i) * c + ch] =
          base * SampleSmallScale(rng, cfg.rician_k, cfg.rician_sigma);
    }
  }
  s.v_down = DownlinkRate(s.h_down, cfg);
  return s;
}

}  // namespace cre
