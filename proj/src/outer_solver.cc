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

#include "cre/outer_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "cre/cost_model.h"
#include "cre/error.h"

namespace cre {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t HashBits(const std::vector<std::uint8_t>& bits) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : bits) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

Rng InnerRng(const RoundContext& rc, const ChannelMatrix& r) {
  const std::uint64_t h = HashBits(r.bits());
  std::seed_seq seq{static_cast<std::uint32_t>(rc.inner_seed),
                    static_cast<std::uint32_t>(rc.inner_seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

// Whole epochs client can fit on channel at p_max; below 1 means unusable.
int FeasibleTau(const RoundContext& rc, int client, int channel) {
  const SystemConfig& cfg = *rc.cfg;
  const double rate = UplinkRate(cfg.p_max, rc.links->UplinkGain(client, channel), cfg);
  if (!(rate > 0)) return 0;
  const double slack = cfg.t_max - rc.t_down - cfg.model_bits / rate;
  return static_cast<int>(std::floor(slack / rc.epoch_latency[client]));
}

RoundSolution FixedRuleSolution(const RoundContext& rc, const std::vector<int>& clients,
                                const std::vector<int>& channels, int tau_fixed) {
  const SystemConfig& cfg = *rc.cfg;
  RoundSolution s = RoundSolution::Idle(cfg.num_channels, rc.clients());
  int tau = tau_fixed;
  std::vector<std::pair<int, int>> kept;
  for (std::size_t k = 0; k < clients.size(); ++k) {
    const int t = FeasibleTau(rc, clients[k], channels[k]);
    if (t < 1) continue;
    kept.emplace_back(clients[k], channels[k]);
    tau = std::min(tau, t);
  }
  if (kept.empty()) return s;
  s.tau = std::max(tau, 1);
  for (auto [i, c] : kept) {
    s.a[i] = 1;
    s.r.set(c, i, true);
    s.p_up[i] = cfg.p_max;
  }
  return s;
}

}  // namespace

BoundInputs BoundInputsFor(const RoundContext& rc, std::span<const int> a) {
  const SystemConfig& cfg = *rc.cfg;
  const auto weights = ComputeAggregationWeights(rc.profiles, a, false);
  std::vector<double> delta = rc.estimates.delta_hat;
  delta.resize(rc.profiles.size(), 0.0);
  const Coefficients co = ComputeCoefficients(a, weights.w, weights.w_tilde, delta);
  BoundInputs in;
  in.eta = cfg.eta;
  in.rho = rc.estimates.rho_hat;
  in.beta = rc.estimates.beta_hat;
  in.a1 = co.a1;
  in.a3 = CoefficientA3(cfg.eta, rc.estimates.beta_hat, co.a2, rc.f_gap);
  in.f_gap = rc.f_gap;
  in.b1 = rc.estimates.b1_est;
  return in;
}

InnerContext BuildInnerContext(const RoundContext& rc, const ChannelMatrix& r) {
  const SystemConfig& cfg = *rc.cfg;
  InnerContext ctx;
  const std::vector<int> a = r.Participation();
  const std::vector<int> ch = r.ChannelOf();
  const double unit = cfg.objective_energy_unit;
  for (int i = 0; i < rc.clients(); ++i) {
    if (a[i]) {
      ctx.clients.push_back(i);
      ctx.epoch_energy.push_back(rc.epoch_energy[i]);
      ctx.epoch_latency.push_back(rc.epoch_latency[i]);
      ctx.queue.push_back(rc.queue[i]);
      ctx.gain.push_back(rc.links->UplinkGain(i, ch[i]));
    } else {
      ctx.idle_term += (cfg.e_add * cfg.e_add - 2.0 * rc.queue[i] * cfg.e_add) / (unit * unit);
    }
  }
  ctx.t_down = rc.t_down;
  ctx.bound = BoundInputsFor(rc, a);
  ctx.v = cfg.v;
  ctx.e_add = cfg.e_add;
  ctx.t_max = cfg.t_max;
  ctx.bits = cfg.model_bits;
  ctx.b_up = cfg.b_up;
  ctx.n0 = cfg.n0;
  ctx.p_max = cfg.p_max;
  ctx.energy_unit = unit;
  ctx.max_iters = cfg.inner_max_iters;
  ctx.eps_p = cfg.eps_p;
  ctx.eps_tau = cfg.eps_tau;
  return ctx;
}

double DriftPlusPenalty(const RoundContext& rc, const RoundSolution& s) {
  const SystemConfig& cfg = *rc.cfg;
  const double unit = cfg.objective_energy_unit;
  const std::vector<int> ch = s.r.ChannelOf();
  double j = 0;
  for (int i = 0; i < rc.clients(); ++i) {
    double e_up = 0;
    if (s.a[i]) e_up = UplinkEnergyAtPower(s.p_up[i], rc.links->UplinkGain(i, ch[i]), cfg);
    const double q = RoundEnergyBalance(cfg.e_add, s.a[i], s.tau, rc.epoch_energy[i], e_up) / unit;
    const double z = rc.queue[i] / unit;
    j += q * q - 2.0 * z * q;
  }
  return j + cfg.v * Corollary1Bound(s.tau, BoundInputsFor(rc, s.a));
}

RoundSolution CandidateSolution::ToRoundSolution() const {
  RoundSolution s;
  s.a = a;
  s.r = r;
  s.p_up = p;
  s.tau = tau;
  return s;
}

CandidateSolution EvaluateCandidate(const RoundContext& rc, const ChannelMatrix& r) {
  CandidateSolution c;
  c.r = r;
  c.a = r.Participation();
  c.p.assign(rc.clients(), 0.0);
  if (r.NumParticipants() == 0) {
    c.tau = 0;
    c.j = DriftPlusPenalty(rc, c.ToRoundSolution());
    c.j2 = c.j;
    return c;
  }
  const InnerContext ctx = BuildInnerContext(rc, r);
  try {
    Rng rng = InnerRng(rc, r);
    const InnerResult inner = AlternateSolve(ctx, rng);
    c.tau = inner.tau;
    for (std::size_t k = 0; k < ctx.size(); ++k) c.p[ctx.clients[k]] = inner.p[k];
    c.j2 = inner.j2;
    c.inner_cap_hit = inner.cap_hit;
    // J differs from J2 by the participants' -Z^2 terms.
    double z2 = 0;
    for (double z : ctx.queue) z2 += (z / ctx.energy_unit) * (z / ctx.energy_unit);
    c.j = inner.j2 - z2;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible && e.code() != ErrorCode::kInfeasibleLatency &&
        e.code() != ErrorCode::kInfeasiblePower) {
      throw;
    }
    c.feasible = false;
    c.j = kInf;
    c.j2 = kInf;
  }
  return c;
}

std::vector<ChannelMatrix> Neighborhood(const ChannelMatrix& r) {
  std::vector<ChannelMatrix> out{r};
  std::vector<int> rows(r.channels()), cols(r.clients());
  for (int c = 0; c < r.channels(); ++c) rows[c] = r.RowSum(c);
  for (int i = 0; i < r.clients(); ++i) cols[i] = r.ColumnSum(i);
  for (int c = 0; c < r.channels(); ++c) {
    for (int i = 0; i < r.clients(); ++i) {
      if (!r.get(c, i) && (rows[c] > 0 || cols[i] > 0)) continue;
      ChannelMatrix n = r;
      n.flip(c, i);
      out.push_back(std::move(n));
    }
  }
  return out;
}

AnnealingResult SimulatedAnnealing(const RoundContext& rc, const AnnealingOptions& opt,
                                   Rng& rng) {
  AnnealingResult res;
  std::map<std::vector<std::uint8_t>, CandidateSolution> cache;
  auto eval = [&](const ChannelMatrix& r) -> const CandidateSolution& {
    auto it = cache.find(r.bits());
    if (it != cache.end()) return it->second;
    ++res.inner_solves;
    return cache.emplace(r.bits(), EvaluateCandidate(rc, r)).first->second;
  };

  CandidateSolution current =
      eval(ChannelMatrix(rc.cfg->num_channels, rc.clients()));
  res.best = current;
  double temp = opt.initial_temp;
  if (!(temp > 0)) {
    // |J_idle| alone can cancel to ~0 when queues sit near E_add / 2, so also
    // take the spread of J over the idle state's neighbors.
    temp = std::abs(current.j);
    for (const ChannelMatrix& n : Neighborhood(current.r)) {
      const double dj = eval(n).j - current.j;
      if (std::isfinite(dj)) temp = std::max(temp, std::abs(dj));
    }
  }
  if (!(temp > 0)) temp = 1.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int s = 0; s < opt.iters; ++s) {
    const std::vector<ChannelMatrix> nb = Neighborhood(current.r);
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng);
    const CandidateSolution& cand = eval(nb[pick]);
    const double u = unif(rng);
    if (cand.j < current.j) {
      current = cand;
    } else if (std::isfinite(cand.j) && u < std::exp(-(cand.j - current.j) / temp)) {
      current = cand;
    }
    if (current.j < res.best.j) res.best = current;
    res.current_j.push_back(current.j);
    res.best_j.push_back(res.best.j);
    res.temperature.push_back(temp);
    temp *= opt.decay;
  }
  return res;
}

RoundSolution ScheduleRandom(const RoundContext& rc, int tau_fixed, Rng& rng) {
  const int u = rc.clients();
  const int c = rc.cfg->num_channels;
  std::vector<int> clients(u), channels(c);
  std::iota(clients.begin(), clients.end(), 0);
  std::iota(channels.begin(), channels.end(), 0);
  std::shuffle(clients.begin(), clients.end(), rng);
  std::shuffle(channels.begin(), channels.end(), rng);
  const int m = std::min(u, c);
  clients.resize(m);
  channels.resize(m);
  return FixedRuleSolution(rc, clients, channels, tau_fixed);
}

RoundSolution ScheduleRoundRobin(const RoundContext& rc, int round, int tau_fixed) {
  const int u = rc.clients();
  const int c = rc.cfg->num_channels;
  const int m = std::min(u, c);
  std::vector<int> clients, channels;
  for (int k = 0; k < m; ++k) {
    clients.push_back(static_cast<int>((static_cast<long long>(round - 1) * c + k) % u));
    channels.push_back(k);
  }
  return FixedRuleSolution(rc, clients, channels, tau_fixed);
}

}  // namespace cre
