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

#include "cre/types.h"

#include <sstream>

#include "cre/error.h"

namespace cre {

int ChannelMatrix::RowSum(int c) const {
  int s = 0;
  for (int i = 0; i < clients_; ++i) s += bits_[Index(c, i)];
  return s;
}

int ChannelMatrix::ColumnSum(int i) const {
  int s = 0;
  for (int c = 0; c < channels_; ++c) s += bits_[Index(c, i)];
  return s;
}

std::vector<int> ChannelMatrix::Participation() const {
  std::vector<int> a(clients_, 0);
  for (int i = 0; i < clients_; ++i) a[i] = ColumnSum(i);
  return a;
}

std::vector<int> ChannelMatrix::ChannelOf() const {
  std::vector<int> out(clients_, -1);
  for (int c = 0; c < channels_; ++c) {
    for (int i = 0; i < clients_; ++i) {
      if (get(c, i)) out[i] = c;
    }
  }
  return out;
}

int ChannelMatrix::NumParticipants() const {
  int n = 0;
  for (auto b : bits_) n += b;
  return n;
}

bool ChannelMatrix::IsValid() const {
  for (int c = 0; c < channels_; ++c) {
    if (RowSum(c) > 1) return false;
  }
  for (int i = 0; i < clients_; ++i) {
    if (ColumnSum(i) > 1) return false;
  }
  return true;
}

RoundSolution RoundSolution::Idle(int channels, int clients) {
  RoundSolution s;
  s.a.assign(clients, 0);
  s.r = ChannelMatrix(channels, clients);
  s.p_up.assign(clients, 0.0);
  s.tau = 0;
  return s;
}

std::string CheckRoundSolution(const RoundSolution& s, double p_max) {
  const int u = s.r.clients();
  const int c = s.r.channels();
  std::ostringstream err;
  if (static_cast<int>(s.a.size()) != u || static_cast<int>(s.p_up.size()) != u) {
    return "vector lengths do not match the channel matrix";
  }
  for (int ch = 0; ch < c; ++ch) {
    if (s.r.RowSum(ch) > 1) {
      err << "channel " << ch << " carries more than one client";
      return err.str();
    }
  }
  for (int i = 0; i < u; ++i) {
    if (s.a[i] != 0 && s.a[i] != 1) {
      err << "a[" << i << "] is not binary";
      return err.str();
    }
    if (s.r.ColumnSum(i) != s.a[i]) {
      err << "client " << i << " column sum differs from a";
      return err.str();
    }
    if ((s.a[i] == 0) != (s.p_up[i] == 0.0)) {
      err << "client " << i << " power must be zero exactly when idle";
      return err.str();
    }
    if (s.p_up[i] < 0.0 || s.p_up[i] > p_max) {
      err << "client " << i << " power outside [0, p_max]";
      return err.str();
    }
  }
  return {};
}

AggregationWeights ComputeAggregationWeights(std::span<const ClientProfile> profiles,
                                             std::span<const int> a,
                                             bool require_participant) {
  AggregationWeights out;
  const std::size_t u = profiles.size();
  out.w.resize(u);
  out.w_tilde.assign(u, 0.0);
  double total = 0;
  for (const auto& p : profiles) total += p.dataset_size;
  double part = 0;
  for (std::size_t i = 0; i < u; ++i) {
    out.w[i] = profiles[i].dataset_size / total;
    if (a[i]) part += profiles[i].dataset_size;
  }
  out.participating_samples = part;
  if (part == 0) {
    if (require_participant) {
      throw Error(ErrorCode::kEmptyParticipation, "no client participates");
    }
    return out;
  }
  for (std::size_t i = 0; i < u; ++i) {
    if (a[i]) out.w_tilde[i] = profiles[i].dataset_size / part;
  }
  return out;
}

}  // namespace cre
