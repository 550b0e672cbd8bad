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

#include "cre/simulation.h"

#include <cmath>
#include <limits>
#include <memory>

#include "cre/channel.h"
#include "cre/error.h"
#include "cre/kernels.h"

namespace cre {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScheduleDecision Warmup(const RoundContext& rc, int round) {
  ScheduleDecision d;
  d.solution = ScheduleRoundRobin(rc, round, 1);
  d.fallback = true;
  return d;
}

}  // namespace

std::string_view SchedulerName(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kCre:
      return "cre";
    case SchedulerKind::kRandom:
      return "random";
    case SchedulerKind::kRoundRobin:
      return "round_robin";
  }
  return "?";
}

std::optional<SchedulerKind> ParseScheduler(std::string_view name) {
  for (auto k : {SchedulerKind::kCre, SchedulerKind::kRandom, SchedulerKind::kRoundRobin}) {
    if (SchedulerName(k) == name) return k;
  }
  return std::nullopt;
}

std::string SchedulerNameList() { return "cre, random, round_robin"; }

Scheduler MakeScheduler(SchedulerKind kind, const SystemConfig& cfg, std::uint64_t seed,
                        std::uint64_t replicate) {
  switch (kind) {
    case SchedulerKind::kCre: {
      AnnealingOptions opt;
      opt.initial_temp = cfg.sa_temp.value_or(0.0);
      opt.decay = cfg.sa_decay;
      opt.iters = cfg.sa_iters;
      auto rng = std::make_shared<Rng>(MakeRng(seed, Stream::kAnnealing, replicate));
      return [opt, rng](const RoundContext& rc, int round) {
        // Without estimates, or when the step violates eta*beta < 1, the
        // bound is unavailable; fall back to the warm-up rule.
        if (!rc.estimates_ready || rc.cfg->eta * rc.estimates.beta_hat >= 1.0) {
          return Warmup(rc, round);
        }
        AnnealingResult res = SimulatedAnnealing(rc, opt, *rng);
        ScheduleDecision d;
        d.solution = res.best.ToRoundSolution();
        d.objective = res.best.j;
        d.inner_cap_hit = res.best.inner_cap_hit;
        return d;
      };
    }
    case SchedulerKind::kRandom: {
      auto rng = std::make_shared<Rng>(MakeRng(seed, Stream::kBaseline, replicate));
      const int tau = cfg.tau_fixed;
      return [rng, tau](const RoundContext& rc, int) {
        ScheduleDecision d;
        d.solution = ScheduleRandom(rc, tau, *rng);
        return d;
      };
    }
    case SchedulerKind::kRoundRobin: {
      const int tau = cfg.tau_fixed;
      return [tau](const RoundContext& rc, int round) {
        ScheduleDecision d;
        d.solution = ScheduleRoundRobin(rc, round, tau);
        return d;
      };
    }
  }
  throw Error(ErrorCode::kUsage, "unknown scheduler");
}

Simulation::Simulation(const SystemConfig& cfg, World world, Scheduler scheduler,
                       std::uint64_t seed, std::uint64_t replicate)
    : cfg_(cfg),
      world_(std::move(world)),
      scheduler_(std::move(scheduler)),
      channel_rng_(MakeRng(seed, Stream::kChannel, replicate)),
      inner_rng_(MakeRng(seed, Stream::kInnerInit, replicate)),
      theta_(world_.theta0),
      queues_(static_cast<int>(world_.profiles.size())) {
  for (const auto& p : world_.profiles) {
    epoch_energy_.push_back(EpochEnergy(cfg_, p.dataset_size));
    epoch_latency_.push_back(EpochLatency(cfg_, p.dataset_size));
  }
  loss_ = GlobalLoss(theta_, world_.data.clients);
  estimates_.f_star_est = world_.optimum.loss;
  estimates_.b1_est = 2.0 * std::sqrt(kernels::SquaredDistance(world_.theta0, world_.optimum.theta));
  if (!(estimates_.b1_est > 0)) estimates_.b1_est = 1.0;
  estimates_.delta_hat.assign(world_.profiles.size(), 0.0);
}

RoundMetrics Simulation::RunRound() {
  const int n = ++round_;
  const int u = static_cast<int>(world_.profiles.size());
  const auto& clients = world_.data.clients;

  const LinkState links = DrawLinks(channel_rng_, world_.large_scale, cfg_, n);
  RoundContext rc;
  rc.cfg = &cfg_;
  rc.profiles = world_.profiles;
  rc.epoch_energy = epoch_energy_;
  rc.epoch_latency = epoch_latency_;
  rc.queue = queues_.z;
  rc.links = &links;
  rc.t_down = TransmissionLatency(cfg_.model_bits, links.v_down);
  rc.estimates = estimates_;
  rc.f_gap = std::max(loss_ - estimates_.f_star_est, kFGapFloor);
  rc.estimates_ready = estimates_ready_;
  rc.inner_seed = inner_rng_();

  ScheduleDecision dec = scheduler_(rc, n);
  RoundSolution& sol = dec.solution;
  if (std::string err = CheckRoundSolution(sol, cfg_.p_max); !err.empty()) {
    throw Error(ErrorCode::kInfeasible, "scheduler produced an invalid solution: " + err);
  }

  RoundMetrics m;
  m.round = n;
  m.participants = sol.a;
  m.tau = sol.tau;
  m.p_up = sol.p_up;
  m.channel_of = sol.r.ChannelOf();
  m.inner_cap_hit = dec.inner_cap_hit;
  m.fallback_schedule = dec.fallback;
  m.bound_value = kNaN;
  m.objective_j = dec.objective;
  if (estimates_ready_) {
    try {
      m.bound_value = Corollary1Bound(sol.tau, BoundInputsFor(rc, sol.a));
      if (std::isnan(m.objective_j)) m.objective_j = DriftPlusPenalty(rc, sol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kStepSizeTooLarge) throw;
    }
  }

  // Realized energy and local training.
  m.energy_j.assign(u, 0.0);
  std::vector<ModelVector> local;
  std::vector<double> local_w;
  std::vector<int> who;
  const auto weights = ComputeAggregationWeights(world_.profiles, sol.a, false);
  for (int i = 0; i < u; ++i) {
    if (!sol.a[i]) continue;
    const double h = links.UplinkGain(i, m.channel_of[i]);
    m.energy_j[i] = sol.tau * epoch_energy_[i] + UplinkEnergyAtPower(sol.p_up[i], h, cfg_);
    local.push_back(LocalTrain(theta_, clients[i], sol.tau, cfg_.eta).theta);
    local_w.push_back(weights.w_tilde[i]);
    who.push_back(i);
  }
  if (!local.empty()) theta_ = Aggregate(local, local_w);

  queues_.Apply(m.energy_j, cfg_.e_add);

  // Losses and gradients of every client at the new global model feed both
  // the metrics and next round's estimates.
  RoundRecord rec;
  rec.grads_local.resize(u);
  rec.grad_global.assign(theta_.size(), 0.0);
  std::vector<double> client_loss(u);
  loss_ = 0;
  for (int i = 0; i < u; ++i) {
    client_loss[i] = LossAndGradient(theta_, clients[i], &rec.grads_local[i]);
    loss_ += weights.w[i] * client_loss[i];
    kernels::Axpy(weights.w[i], rec.grads_local[i], rec.grad_global);
  }
  if (!std::isfinite(loss_)) throw Error(ErrorCode::kNonFiniteLoss, "global loss diverged");
  for (std::size_t k = 0; k < who.size(); ++k) {
    const int i = who[k];
    ParticipantObservation o;
    ModelVector g_local;
    o.loss_local = LossAndGradient(local[k], clients[i], &g_local);
    o.loss_global = client_loss[i];
    o.grad_diff_norm = std::sqrt(kernels::SquaredDistance(g_local, rec.grads_local[i]));
    o.model_diff_norm = std::sqrt(kernels::SquaredDistance(local[k], theta_));
    rec.participants.push_back(o);
  }
  if (!rec.participants.empty()) {
    estimates_ = RefreshEstimates(rec, estimates_, cfg_.running_max_rho_beta);
    estimates_ready_ = true;
  }

  m.queue_j = queues_.z;
  m.global_loss = loss_;
  m.test_accuracy = Accuracy(theta_, world_.data.test);
  m.loss_gap = loss_ - estimates_.f_star_est;
  for (double e : m.energy_j) m.round_energy_j += e;
  cumulative_energy_ += m.round_energy_j;
  m.cumulative_energy_j = cumulative_energy_;
  m.max_queue_j = queues_.MaxZ();
  return m;
}

}  // namespace cre
