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

#ifndef CRE_TYPES_H_
#define CRE_TYPES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cre {

struct ClientProfile {
  int id = 0;
  double distance_m = 1.0;
  int dataset_size = 1;
  double non_iid_degree = 0.0;
};

// Binary C x U channel allocation matrix; entry (c, i) = 1 when channel c
// carries client i's upload.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(int channels, int clients)
      : channels_(channels), clients_(clients),
        bits_(static_cast<std::size_t>(channels) * clients, 0) {}

  int channels() const { return channels_; }
  int clients() const { return clients_; }

  bool get(int c, int i) const { return bits_[Index(c, i)] != 0; }
  void set(int c, int i, bool v) { bits_[Index(c, i)] = v ? 1 : 0; }
  void flip(int c, int i) { bits_[Index(c, i)] ^= 1; }

  int RowSum(int c) const;
  int ColumnSum(int i) const;

  // Column sums; binary whenever the matrix is valid.
  std::vector<int> Participation() const;
  // Channel index per client, -1 for idle clients. Requires column sums <= 1.
  std::vector<int> ChannelOf() const;
  int NumParticipants() const;

  // Row sums <= 1 and column sums <= 1.
  bool IsValid() const;

  // Compact key used for caching and ordering.
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

 private:
  std::size_t Index(int c, int i) const {
    return static_cast<std::size_t>(c) * clients_ + i;
  }

  int channels_ = 0;
  int clients_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Decision tuple chosen for one round.
struct RoundSolution {
  std::vector<int> a;
  ChannelMatrix r;
  std::vector<double> p_up;
  int tau = 0;

  static RoundSolution Idle(int channels, int clients);
};

// Checks C1-C4: binary entries, one channel per participant, at most one
// client per channel, zero power exactly for idle clients and p <= p_max.
// Returns an empty string when valid, otherwise a description.
std::string CheckRoundSolution(const RoundSolution& s, double p_max);

struct AggregationWeights {
  std::vector<double> w;        // D_i / sum D
  std::vector<double> w_tilde;  // a_i D_i / sum a_j D_j (zeros when no one participates)
  double participating_samples = 0;
};

// Throws kEmptyParticipation when require_participant is set and a == 0.
AggregationWeights ComputeAggregationWeights(std::span<const ClientProfile> profiles,
                                             std::span<const int> a,
                                             bool require_participant = true);

struct RoundMetrics {
  int round = 0;
  std::vector<int> participants;
  int tau = 0;
  std::vector<double> energy_j;  // per client, this round
  std::vector<double> queue_j;   // Z after the update
  std::vector<double> p_up;
  std::vector<int> channel_of;
  double global_loss = 0;
  double test_accuracy = 0;
  double loss_gap = 0;       // F(theta^n) - F* estimate
  double bound_value = 0;    // predicted upper bound on loss_gap, NaN if unavailable
  double objective_j = 0;
  double round_energy_j = 0;
  double cumulative_energy_j = 0;
  double max_queue_j = 0;
  bool inner_cap_hit = false;
  // Round scheduled by the round-robin warm-up instead of the optimizer.
  bool fallback_schedule = false;
};

}  // namespace cre

#endif  // CRE_TYPES_H_
