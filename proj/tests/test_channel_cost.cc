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

#include "cre/channel.h"
#include "cre/cost_model.h"
#include "cre/error.h"
#include "doctest.h"
#include "test_util.h"

using cre::testing::RelClose;

namespace {
cre::SystemConfig Defaults() { return cre::ValidateConfig(cre::RawConfig{}); }
}  // namespace

TEST_CASE("path loss") {
  CHECK(RelClose(cre::PathLossDb(1.0, 1.0), 28.0, 1e-15));
  CHECK(RelClose(cre::LargeScaleGain(1.0, 1.0), std::pow(10.0, -2.8), 1e-14));
  // 28 + 22 log10(500) + 20 log10(2), evaluated by hand: 93.397940 dB.
  CHECK(RelClose(cre::PathLossDb(500.0, 2.0), 93.39794, 1e-7));
  CHECK(RelClose(cre::LargeScaleGain(500.0, 2.0), 4.5731e-10, 1e-4));
  CHECK(RelClose(cre::LargeScaleGain(100.0, 2.0) / cre::LargeScaleGain(1000.0, 2.0),
                 std::pow(10.0, 2.2), 1e-12));
}

TEST_CASE("rician small-scale fading") {
  cre::Rng rng = cre::MakeRng(42, cre::Stream::kChannel);
  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += cre::SampleSmallScale(rng, 4.0, 1.0);
  CHECK(RelClose(sum / n, 18.0, 0.01));

  CHECK(RelClose(cre::SampleSmallScale(rng, 4.0, 0.0), 16.0, 1e-15));

  cre::Rng a = cre::MakeRng(9, cre::Stream::kChannel);
  cre::Rng b = cre::MakeRng(9, cre::Stream::kChannel);
  for (int i = 0; i < 10; ++i) CHECK(cre::SampleSmallScale(a, 4, 1) == cre::SampleSmallScale(b, 4, 1));
}

TEST_CASE("rates") {
  const cre::SystemConfig cfg = Defaults();
  const double h1 = cfg.b_down * cfg.n0 / cfg.p_down;
  const std::vector<double> one{h1};
  CHECK(RelClose(cre::DownlinkRate(one, cfg), cfg.b_down, 1e-12));
  const std::vector<double> two{h1, 3 * h1};
  CHECK(RelClose(cre::DownlinkRate(two, cfg), cfg.b_down, 1e-12));
  const std::vector<double> snr3{3 * h1};
  CHECK(RelClose(cre::DownlinkRate(snr3, cfg), 4e7, 1e-12));

  const double hu = cfg.b_up * cfg.n0 / 0.1;
  CHECK(RelClose(cre::UplinkRate(0.1, hu, cfg), 1e6, 1e-12));
  CHECK(cre::UplinkRate(0.0, hu, cfg) == 0.0);
  CHECK(RelClose(cre::UplinkRate(0.3, hu, cfg), 2e6, 1e-12));
}

TEST_CASE("latency and energy") {
  CHECK(RelClose(cre::TransmissionLatency(318080, 3.1808e7), 0.01, 1e-14));
  CHECK(cre::TransmissionLatency(0, 0) == 0.0);
  CHECK_THROWS_AS(cre::TransmissionLatency(10, 0), cre::Error);
  CHECK(RelClose(cre::UplinkEnergy(0.2, 0.005), 1e-3, 1e-14));
  CHECK(cre::UplinkEnergy(0.2, 0.0) == 0.0);
}

TEST_CASE("computation cost") {
  cre::SystemConfig cfg = Defaults();
  CHECK(RelClose(cre::EpochLatency(cfg, 1000), 2e-4, 1e-14));
  CHECK(RelClose(cre::EpochLatency(cfg, 500), 1e-4, 1e-14));
  CHECK(RelClose(cre::EpochLatency(cfg, 2000), 2 * cre::EpochLatency(cfg, 1000), 1e-15));
  CHECK(RelClose(cre::EpochEnergy(cfg, 1000), 2.5e-4, 1e-14));
  CHECK(cre::EpochEnergy(cfg, 0) == 0.0);
  const double e = cre::EpochEnergy(cfg, 1000);
  cfg.cpu_freq *= 2;
  CHECK(RelClose(cre::EpochEnergy(cfg, 1000), 4 * e, 1e-14));
}

TEST_CASE("energy balance and virtual queue") {
  CHECK(cre::RoundEnergyBalance(0.00175, 0, 5, 2.5e-4, 5e-4) == 0.00175);
  CHECK(std::abs(cre::RoundEnergyBalance(0.00175, 1, 5, 2.5e-4, 5e-4)) < 1e-18);
  CHECK(std::abs(cre::RoundEnergyBalance(0.00175, 1, 7, 2.5e-4, 0.0)) < 1e-18);

  CHECK(RelClose(cre::UpdateVirtualQueue(0.01, 0.004), 0.006, 1e-14));
  CHECK(cre::UpdateVirtualQueue(0.001, 0.02) == 0.0);
  CHECK(cre::UpdateVirtualQueue(0.003, 0.0) == 0.003);

  cre::EnergyQueueState q;
  q.z.assign(2, 0.0);
  q.consumed.assign(2, 0.0);
  q.budget.assign(2, 0.0);
  const std::vector<double> spent{0.003, 0.0};
  q.Apply(spent, 0.00175);
  CHECK(RelClose(q.z[0], 0.00125, 1e-12));
  CHECK(q.z[1] == 0.0);
  CHECK(q.MaxZ() == q.z[0]);
}
