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

#include <sstream>

#include "cre/config.h"
#include "cre/error.h"
#include "cre/types.h"
#include "doctest.h"
#include "test_util.h"

using cre::testing::RelClose;

TEST_CASE("unit conversions") {
  CHECK(RelClose(cre::DbmPerHzToWattPerHz(-174.0), 3.981071705534969e-21, 1e-12));
  CHECK(cre::DbToLinear(0.0) == 1.0);
  CHECK(RelClose(cre::DbToLinear(65.0), 3162277.6601683795, 1e-12));
}

TEST_CASE("validation rejects bad values") {
  cre::RawConfig raw;
  raw.sa_decay = 1.2;
  CHECK_THROWS_AS(cre::ValidateConfig(raw), cre::Error);
  try {
    cre::ValidateConfig(raw);
  } catch (const cre::Error& e) {
    CHECK(e.code() == cre::ErrorCode::kInvalidFraction);
  }
  raw = {};
  raw.p_max_w = 0;
  CHECK_THROWS_AS(cre::ValidateConfig(raw), cre::Error);
  raw = {};
  raw.non_iid_degree = 1.5;
  CHECK_THROWS_AS(cre::ValidateConfig(raw), cre::Error);
}

TEST_CASE("config text round trip and hash") {
  cre::RawConfig raw;
  raw.v = 3.5;
  raw.rounds = 17;
  raw.seed = 99;
  raw.sa_temp = 2.0;
  std::ostringstream out;
  cre::WriteConfig(out, raw);
  std::istringstream in(out.str());
  const cre::RawConfig back = cre::ParseConfig(in);
  CHECK(back.v == 3.5);
  CHECK(back.rounds == 17);
  CHECK(back.seed == 99u);
  REQUIRE(back.sa_temp.has_value());
  CHECK(*back.sa_temp == 2.0);
  CHECK(cre::ConfigHash(back) == cre::ConfigHash(raw));
  raw.v = 3.6;
  CHECK(cre::ConfigHash(back) != cre::ConfigHash(raw));
}

TEST_CASE("unknown config keys are rejected") {
  std::istringstream in("[solver]\nvee = 1\n");
  try {
    cre::ParseConfig(in);
    FAIL("expected an error");
  } catch (const cre::Error& e) {
    CHECK(e.code() == cre::ErrorCode::kUnknownKey);
  }
}

namespace {
std::vector<cre::ClientProfile> Profiles(std::initializer_list<int> sizes) {
  std::vector<cre::ClientProfile> out;
  for (int d : sizes) {
    cre::ClientProfile p;
    p.id = static_cast<int>(out.size());
    p.dataset_size = d;
    out.push_back(p);
  }
  return out;
}
}  // namespace

TEST_CASE("aggregation weights") {
  const auto equal = Profiles({1000, 1000});
  const std::vector<int> both{1, 1};
  auto w = cre::ComputeAggregationWeights(equal, both);
  CHECK(w.w_tilde == std::vector<double>{0.5, 0.5});

  const auto skew = Profiles({1000, 3000});
  w = cre::ComputeAggregationWeights(skew, both);
  CHECK(w.w == std::vector<double>{0.25, 0.75});

  const std::vector<int> second{0, 1};
  w = cre::ComputeAggregationWeights(skew, second);
  CHECK(w.w_tilde == std::vector<double>{0.0, 1.0});
  CHECK(w.participating_samples == 3000.0);

  const std::vector<int> none{0, 0};
  CHECK_THROWS_AS(cre::ComputeAggregationWeights(skew, none), cre::Error);
  CHECK(cre::ComputeAggregationWeights(skew, none, false).w_tilde ==
        std::vector<double>{0.0, 0.0});
}

TEST_CASE("channel matrix constraints") {
  cre::ChannelMatrix m(2, 3);
  CHECK(m.IsValid());
  CHECK(m.NumParticipants() == 0);
  m.set(0, 1, true);
  m.set(1, 2, true);
  CHECK(m.IsValid());
  CHECK(m.ChannelOf() == std::vector<int>{-1, 0, 1});
  CHECK(m.Participation() == std::vector<int>{0, 1, 1});
  m.set(0, 2, true);  // two channels for client 2, two clients on channel 0
  CHECK_FALSE(m.IsValid());
}

TEST_CASE("round solution checks") {
  cre::RoundSolution s = cre::RoundSolution::Idle(2, 3);
  CHECK(cre::CheckRoundSolution(s, 0.2).empty());
  s.a[0] = 1;
  CHECK_FALSE(cre::CheckRoundSolution(s, 0.2).empty());  // a disagrees with R
  s.r.set(0, 0, true);
  s.tau = 2;
  s.p_up[0] = 0.1;
  CHECK(cre::CheckRoundSolution(s, 0.2).empty());
  s.p_up[0] = 0.3;
  CHECK_FALSE(cre::CheckRoundSolution(s, 0.2).empty());
}
