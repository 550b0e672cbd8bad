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

#include "cre/verification.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cre/channel.h"
#include "cre/cost_model.h"
#include "cre/error.h"
#include "cre/estimator.h"
#include "cre/fl_engine.h"
#include "cre/harness.h"
#include "cre/inner_solver.h"
#include "cre/kernels.h"
#include "cre/outer_solver.h"
#include "cre/rng.h"
#include "cre/simulation.h"

namespace cre {
namespace {

std::string Fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(Uniform(rng, std::log(lo), std::log(hi)));
}

// ---------------------------------------------------------------------------
// Oracle arithmetic written straight from the model equations, sharing no
// code with the solver.

double OracleRate(double b, double p, double h, double n0) {
  return b * std::log1p(p * h / (b * n0)) / std::numbers::ln2;
}

double OracleBound(double tau, const BoundInputs& in) {
  const double x = in.eta * in.beta;
  const double first = in.rho * in.a1 / in.beta * (std::pow(1.0 + x, tau) - x * tau - 1.0);
  const double c = (2.0 * in.eta - in.eta * in.eta * in.beta) / (in.b1 * in.b1);
  return first + tau * in.a3 + 2.0 / (c * tau + 2.0 / in.f_gap);
}

double OracleResidualSq(const InnerContext& ctx, std::size_t k, double tau, double p) {
  const double e = p * ctx.bits / OracleRate(ctx.b_up, p, ctx.gain[k], ctx.n0);
  const double r = (ctx.queue[k] + tau * ctx.epoch_energy[k] + e - ctx.e_add) / ctx.energy_unit;
  return r * r;
}

double OracleJ2(double tau, const std::vector<double>& p, const InnerContext& ctx) {
  double j = ctx.idle_term;
  for (std::size_t k = 0; k < ctx.size(); ++k) j += OracleResidualSq(ctx, k, tau, p[k]);
  return j + ctx.v * OracleBound(tau, ctx.bound);
}

// Lowest power meeting the upload deadline window, or +inf.
double OracleMinPower(const InnerContext& ctx, std::size_t k, double window) {
  if (window <= 0) return std::numeric_limits<double>::infinity();
  return (std::pow(2.0, ctx.bits / (ctx.b_up * window)) - 1.0) * ctx.b_up * ctx.n0 / ctx.gain[k];
}

// Exhaustive integer tau times per-client power grids.
double GridJ2(const InnerContext& ctx, int grid_points) {
  double best = std::numeric_limits<double>::infinity();
  for (int tau = 1; tau < 100000; ++tau) {
    double j = ctx.idle_term + ctx.v * OracleBound(tau, ctx.bound);
    bool feasible = true;
    for (std::size_t k = 0; k < ctx.size() && feasible; ++k) {
      const double window = ctx.t_max - ctx.t_down - tau * ctx.epoch_latency[k];
      const double lo = std::max(OracleMinPower(ctx, k, window), 1e-300);
      if (!(lo <= ctx.p_max)) {
        feasible = false;
        break;
      }
      double m = std::numeric_limits<double>::infinity();
      for (int g = 0; g < grid_points; ++g) {
        const double p = lo + (ctx.p_max - lo) * g / (grid_points - 1);
        m = std::min(m, OracleResidualSq(ctx, k, tau, p));
      }
      j += m;
    }
    if (!feasible) break;
    best = std::min(best, j);
  }
  return best;
}

SystemConfig TableTwo(const VerifyOptions& opt) { return ValidateConfig(opt.base); }

// Gain of a client dropped uniformly in the cell, with one fading draw.
double RandomGain(Rng& rng, const SystemConfig& cfg, double max_radius) {
  const double r = max_radius * std::sqrt(Uniform(rng, 1e-4, 1.0));
  return LargeScaleGain(r, cfg.carrier_freq_ghz) * cfg.antenna_gain *
         SampleSmallScale(rng, cfg.rician_k, cfg.rician_sigma);
}

InnerContext BaseContext(const SystemConfig& cfg) {
  InnerContext ctx;
  ctx.e_add = cfg.e_add;
  ctx.t_max = cfg.t_max;
  ctx.bits = cfg.model_bits;
  ctx.b_up = cfg.b_up;
  ctx.n0 = cfg.n0;
  ctx.p_max = cfg.p_max;
  ctx.energy_unit = cfg.objective_energy_unit;
  ctx.max_iters = cfg.inner_max_iters;
  ctx.eps_p = cfg.eps_p;
  ctx.eps_tau = cfg.eps_tau;
  return ctx;
}

bool FeasibleAtOneEpoch(const InnerContext& ctx) {
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const double window = ctx.t_max - ctx.t_down - ctx.epoch_latency[k];
    if (!(OracleMinPower(ctx, k, window) <= ctx.p_max)) return false;
  }
  return true;
}

InnerContext RandomInnerContext(Rng& rng, const SystemConfig& cfg) {
  for (;;) {
    InnerContext ctx = BaseContext(cfg);
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < n; ++k) {
      const double d = Uniform(rng, 500, 1500);
      ctx.clients.push_back(k);
      ctx.epoch_energy.push_back(EpochEnergy(cfg, d));
      ctx.epoch_latency.push_back(EpochLatency(cfg, d));
      ctx.queue.push_back(Uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : Uniform(rng, 0.0, 3e-3));
      ctx.gain.push_back(RandomGain(rng, cfg, cfg.cell_radius_m));
    }
    const double unit = ctx.energy_unit;
    for (int k = n; k < cfg.num_clients; ++k) {
      const double z = Uniform(rng, 0.0, 2e-3);
      ctx.idle_term += (cfg.e_add * cfg.e_add - 2.0 * z * cfg.e_add) / (unit * unit);
    }
    ctx.t_down = Uniform(rng, 1e-4, 1e-3);
    ctx.v = LogUniform(rng, 0.01, 10.0);
    ctx.bound.eta = cfg.eta;
    ctx.bound.beta = Uniform(rng, 0.5, 5.0);
    ctx.bound.rho = Uniform(rng, 0.2, 3.0);
    ctx.bound.a1 = Uniform(rng, 0.0, 2.0);
    ctx.bound.a3 = Uniform(rng, 0.0, 0.5);
    ctx.bound.f_gap = LogUniform(rng, 1e-3, 2.5);
    ctx.bound.b1 = Uniform(rng, 1.0, 20.0);
    if (FeasibleAtOneEpoch(ctx)) return ctx;
  }
}

// ---------------------------------------------------------------------------

CheckResult Criterion1(const VerifyOptions& opt) {
  CheckResult r;
  const SystemConfig cfg = TableTwo(opt);
  Rng rng = MakeRng(opt.base.seed, Stream::kInnerInit, 1001);
  int bad = 0;
  int bad_plain = 0;
  double worst = -1e300;
  for (int t = 0; t < 500; ++t) {
    const InnerContext ctx = RandomInnerContext(rng, cfg);
    Rng init = MakeRng(opt.base.seed + t, Stream::kInnerInit, 1);
    const InnerResult res = AlternateSolve(ctx, init);
    const double grid = GridJ2(ctx, 200);
    const double gap = (res.j2 - grid) / std::max(std::abs(grid), 1e-12);
    worst = std::max(worst, gap);
    if (gap > 1e-3) ++bad;
    InnerContext plain = ctx;
    plain.tau_scan = false;
    Rng init2 = MakeRng(opt.base.seed + t, Stream::kInnerInit, 1);
    if (AlternateSolve(plain, init2).j2 - grid > 1e-3 * std::max(std::abs(grid), 1e-12)) {
      ++bad_plain;
    }
  }
  r.pass = bad == 0;
  r.detail = "instances above +0.1% of grid: " + std::to_string(bad) +
             "/500, worst relative excess " + Fmt(worst) +
             "; alternation without the closing tau scan: " + std::to_string(bad_plain) + "/500";
  return r;
}

CheckResult Criterion2(const VerifyOptions& opt) {
  CheckResult r;
  const SystemConfig cfg = TableTwo(opt);
  Rng rng = MakeRng(opt.base.seed, Stream::kInnerInit, 1002);
  double worst = 0;
  int done = 0;
  while (done < 1000) {
    const double h = RandomGain(rng, cfg, cfg.cell_radius_m);
    const double bits = LogUniform(rng, 1e4, 1e6);
    const double window = Uniform(rng, 1e-3, 1e-2);
    const double p_min =
        std::expm1(bits / (cfg.b_up * window) * std::numbers::ln2) * cfg.b_up * cfg.n0 / h;
    if (!(p_min < cfg.p_max)) continue;
    const double e_min = p_min * window;
    const double e_max = cfg.p_max * bits / OracleRate(cfg.b_up, cfg.p_max, h, cfg.n0);
    const double target = Uniform(rng, e_min, e_max);
    const double p = PowerForEnergy(target, h, bits, cfg.b_up, cfg.n0);
    const double e = p * bits / OracleRate(cfg.b_up, p, h, cfg.n0);
    worst = std::max(worst, std::abs(e - target) / target);
    ++done;
  }
  r.pass = worst <= 1e-9;
  r.detail = "max relative energy error " + Fmt(worst, 3) + " over 1000 draws";
  return r;
}

// Integer argmin of the oracle J2 at fixed powers.
int GridTau(const InnerContext& ctx, const std::vector<double>& p) {
  double tmax = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    const double up = ctx.bits / OracleRate(ctx.b_up, p[k], ctx.gain[k], ctx.n0);
    tmax = std::min(tmax, (ctx.t_max - ctx.t_down - up) / ctx.epoch_latency[k]);
  }
  int best = 1;
  for (int t = 2; t <= static_cast<int>(std::floor(tmax)); ++t) {
    if (OracleJ2(t, p, ctx) < OracleJ2(best, p, ctx)) best = t;
  }
  return best;
}

CheckResult Criterion3(const VerifyOptions& opt) {
  CheckResult r;
  const SystemConfig cfg = TableTwo(opt);
  InnerContext base = BaseContext(cfg);
  base.clients = {0};
  base.epoch_energy = {EpochEnergy(cfg, 1000)};
  base.epoch_latency = {EpochLatency(cfg, 1000)};
  base.gain = {LargeScaleGain(50.0, cfg.carrier_freq_ghz) * cfg.antenna_gain * 18.0};
  base.t_down = 4e-4;
  base.bound = {cfg.eta, 1.0, 1.0, 0.0, 0.0, 1.0, 10.0};
  const std::vector<double> p{0.05};

  struct Case {
    const char* name;
    TauCase expect;
    double z;
    double v;
  };
  const Case cases[] = {
      {"derivative>=0", TauCase::kDerivativeNonNegative, 5e-3, 0.01},
      {"interior", TauCase::kInterior, 0.0, 0.01},
      {"clipped", TauCase::kClipped, 0.0, 1e4},
  };
  r.pass = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    InnerContext ctx = base;
    ctx.queue = {c.z};
    ctx.v = c.v;
    const TauChoice got = OptimalTau(ctx, p);
    const int grid = GridTau(ctx, p);
    const bool ok = got.which == c.expect && got.tau == grid;
    r.pass = r.pass && ok;
    d << c.name << ": tau=" << got.tau << " grid=" << grid << (ok ? " ok" : " MISMATCH") << "; ";
  }
  r.detail = d.str();
  return r;
}

CheckResult Criterion4(const VerifyOptions& opt) {
  CheckResult r;
  const double eta = 0.1;
  const int tau = 12;
  int violations = 0;
  int comparisons = 0;
  double tightest = 0;
  for (int inst = 0; inst < 50; ++inst) {
    Rng rng = MakeRng(opt.base.seed + inst, Stream::kData, 4004);
    DataSpec spec;
    spec.clients = 2 + inst % 4;
    spec.mean_size = 120;
    spec.size_std = 30;
    spec.non_iid_degree = 0.5;
    spec.test_fraction = 0.0;
    const FederatedData data = GenerateNonIidData(rng, spec);
    const int u = spec.clients;
    ModelVector theta0(ParameterCount(spec.feature_dim, spec.num_classes));
    std::normal_distribution<double> n01(0.0, 0.3);
    for (double& v : theta0) v = n01(rng);

    std::vector<int> a(u, 1);
    std::vector<double> w(u);
    double total = 0;
    for (const auto& ds : data.clients) total += ds.size();
    for (int i = 0; i < u; ++i) w[i] = data.clients[i].size() / total;

    std::vector<std::vector<ModelVector>> local(u);
    for (int i = 0; i < u; ++i) local[i] = LocalTrain(theta0, data.clients[i], tau, eta).trajectory;
    const std::vector<ModelVector> phi = AuxiliaryTrajectory(theta0, data.clients, a, tau, eta);

    double beta = 0;
    std::vector<double> delta(u, 0.0);
    for (int m = 0; m <= tau; ++m) {
      std::vector<ModelVector> g_phi(u);
      ModelVector g_mean(theta0.size(), 0.0);
      for (int i = 0; i < u; ++i) {
        g_phi[i] = Gradient(phi[m], data.clients[i]);
        kernels::Axpy(w[i], g_phi[i], g_mean);
      }
      for (int i = 0; i < u; ++i) {
        delta[i] = std::max(delta[i], std::sqrt(kernels::SquaredDistance(g_phi[i], g_mean)));
        const double dx = std::sqrt(kernels::SquaredDistance(local[i][m], phi[m]));
        if (dx > 1e-14) {
          const ModelVector g_loc = Gradient(local[i][m], data.clients[i]);
          beta = std::max(beta, std::sqrt(kernels::SquaredDistance(g_loc, g_phi[i])) / dx);
        }
      }
    }
    if (!(beta > 0)) beta = 1e-12;
    const double a1 = ComputeCoefficients(a, w, w, delta).a1;
    for (int m = 0; m <= tau; ++m) {
      ModelVector avg(theta0.size(), 0.0);
      for (int i = 0; i < u; ++i) kernels::Axpy(w[i], local[i][m], avg);
      const double gap = std::sqrt(kernels::SquaredDistance(avg, phi[m]));
      const double bound = Theorem1Bound(m, eta, beta, a1);
      ++comparisons;
      if (gap > bound * (1 + 1e-9) + 1e-12) ++violations;
      if (bound > 1e-9) tightest = std::max(tightest, gap / bound);
      for (int i = 0; i < u; ++i) {
        const double gi = std::sqrt(kernels::SquaredDistance(local[i][m], phi[m]));
        ++comparisons;
        if (gi > Lemma2Bound(m, eta, beta, w, delta, i) * (1 + 1e-9) + 1e-12) ++violations;
      }
    }
  }
  r.pass = violations == 0;
  r.detail = std::to_string(violations) + " violations in " + std::to_string(comparisons) +
             " comparisons; max gap/bound " + Fmt(tightest, 4);
  return r;
}

SystemConfig WithRounds(const VerifyOptions& opt, int rounds, double v) {
  RawConfig raw = opt.base;
  raw.rounds = rounds;
  raw.v = v;
  return ValidateConfig(raw);
}

CheckResult Criterion5(const VerifyOptions& opt) {
  CheckResult r;
  const auto rounds = RunReplicate(WithRounds(opt, 200, opt.base.v), SchedulerKind::kCre, 0);
  std::vector<double> bound, gap;
  int covered = 0;
  for (const auto& m : rounds) {
    if (m.round <= 20 || std::isnan(m.bound_value)) continue;
    bound.push_back(m.bound_value);
    gap.push_back(m.loss_gap);
    covered += m.bound_value >= m.loss_gap;
  }
  const double frac = bound.empty() ? 0.0 : static_cast<double>(covered) / bound.size();
  const double rho = bound.size() > 2 ? SpearmanCorrelation(bound, gap) : 0.0;
  r.pass = !bound.empty() && frac >= 0.95 && rho >= 0.8;
  r.detail = "bound >= gap in " + Fmt(100 * frac, 4) + "% of " + std::to_string(bound.size()) +
             " rounds; Spearman " + Fmt(rho, 4);
  return r;
}

CheckResult Criterion6(const VerifyOptions& opt) {
  CheckResult r;
  r.pass = true;
  std::ostringstream d;
  const int n = 500;
  for (double v : {0.1, 1.0}) {
    const SystemConfig cfg = WithRounds(opt, n, v);
    const auto rounds = RunReplicate(cfg, SchedulerKind::kCre, 0);
    const double ratio = rounds.back().max_queue_j / n / cfg.e_add;
    r.pass = r.pass && ratio <= 0.01;
    d << "V=" << v << ": max Z/N = " << Fmt(100 * ratio, 4) << "% of E_add; ";
  }
  r.detail = d.str();
  return r;
}

struct FinalMeans {
  double loss = 0;
  double accuracy = 0;
  double energy = 0;
};

FinalMeans MeanFinal(const SystemConfig& cfg, SchedulerKind kind, int replicates) {
  FinalMeans f;
  for (int rep = 0; rep < replicates; ++rep) {
    const auto rounds = RunReplicate(cfg, kind, rep);
    f.loss += rounds.back().global_loss / replicates;
    f.accuracy += rounds.back().test_accuracy / replicates;
    f.energy += rounds.back().cumulative_energy_j / replicates;
  }
  return f;
}

CheckResult Criterion7(const VerifyOptions& opt) {
  CheckResult r;
  std::vector<double> energy, loss;
  std::ostringstream d;
  for (double v : {0.01, 0.1, 1.0, 10.0}) {
    const FinalMeans f = MeanFinal(WithRounds(opt, opt.base.rounds, v), SchedulerKind::kCre, 5);
    energy.push_back(f.energy);
    loss.push_back(f.loss);
    d << "V=" << v << " E=" << Fmt(f.energy, 5) << "J loss=" << Fmt(f.loss, 5) << "; ";
  }
  const int e_inv = MonotoneInversions(energy, true);
  const int l_inv = MonotoneInversions(loss, false);
  r.pass = e_inv <= 1 && l_inv <= 1;
  d << "energy inversions " << e_inv << ", loss inversions " << l_inv;
  r.detail = d.str();
  return r;
}

CheckResult Criterion8(const VerifyOptions& opt) {
  CheckResult r;
  RawConfig raw = opt.base;
  raw.non_iid_degree = 0.6;
  raw.dataset_size_std = 150;
  const SystemConfig cfg = ValidateConfig(raw);
  const FinalMeans cre = MeanFinal(cfg, SchedulerKind::kCre, 5);
  const FinalMeans rnd = MeanFinal(cfg, SchedulerKind::kRandom, 5);
  const FinalMeans rr = MeanFinal(cfg, SchedulerKind::kRoundRobin, 5);
  const bool acc = cre.accuracy >= rnd.accuracy + 0.01 && cre.accuracy >= rr.accuracy + 0.01;
  const bool energy = cre.energy <= rnd.energy && cre.energy <= rr.energy;
  r.pass = acc && energy;
  r.detail = "accuracy cre/random/rr = " + Fmt(100 * cre.accuracy, 4) + "/" +
             Fmt(100 * rnd.accuracy, 4) + "/" + Fmt(100 * rr.accuracy, 4) +
             "%; energy J = " + Fmt(cre.energy, 4) + "/" + Fmt(rnd.energy, 4) + "/" +
             Fmt(rr.energy, 4);
  return r;
}

// Every C x U 0-1 matrix with row and column sums <= 1.
std::vector<ChannelMatrix> AllAllocations(int channels, int clients) {
  std::vector<ChannelMatrix> out;
  const int bits = channels * clients;
  for (long mask = 0; mask < (1L << bits); ++mask) {
    ChannelMatrix m(channels, clients);
    for (int b = 0; b < bits; ++b) {
      if (mask >> b & 1) m.set(b / clients, b % clients, true);
    }
    if (m.IsValid()) out.push_back(m);
  }
  return out;
}

CheckResult Criterion9(const VerifyOptions& opt) {
  CheckResult r;
  RawConfig raw = opt.base;
  raw.num_channels = 2;
  raw.num_clients = 3;
  const SystemConfig cfg = ValidateConfig(raw);
  // The default cooling rate is sized for the default budget; stretch the same
  // curve over kIters so the final temperature ratio matches.
  constexpr int kIters = 500;
  const double stretched = std::pow(cfg.sa_decay, static_cast<double>(cfg.sa_iters) / kIters);
  int hits = 0;
  int hits_default = 0;
  std::size_t enumerated = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng = MakeRng(opt.base.seed + seed, Stream::kAnnealing, 9009);
    std::vector<ClientProfile> profiles(3);
    std::vector<double> large(3);
    RoundContext rc;
    rc.cfg = &cfg;
    for (int i = 0; i < 3; ++i) {
      profiles[i].id = i;
      profiles[i].dataset_size = std::uniform_int_distribution<int>(600, 1400)(rng);
      profiles[i].distance_m = cfg.cell_radius_m * std::sqrt(Uniform(rng, 0.01, 1.0));
      large[i] = LargeScaleGain(profiles[i].distance_m, cfg.carrier_freq_ghz);
      rc.epoch_energy.push_back(EpochEnergy(cfg, profiles[i].dataset_size));
      rc.epoch_latency.push_back(EpochLatency(cfg, profiles[i].dataset_size));
      rc.queue.push_back(Uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : Uniform(rng, 0.0, 2e-3));
    }
    const LinkState links = DrawLinks(rng, large, cfg, 1);
    rc.profiles = profiles;
    rc.links = &links;
    rc.t_down = TransmissionLatency(cfg.model_bits, links.v_down);
    rc.estimates.rho_hat = Uniform(rng, 0.5, 2.0);
    rc.estimates.beta_hat = Uniform(rng, 0.5, 3.0);
    rc.estimates.b1_est = Uniform(rng, 2.0, 10.0);
    for (int i = 0; i < 3; ++i) rc.estimates.delta_hat.push_back(Uniform(rng, 0.2, 2.0));
    rc.f_gap = Uniform(rng, 0.05, 2.0);
    rc.estimates_ready = true;
    rc.inner_seed = rng();

    const auto all = AllAllocations(2, 3);
    enumerated = all.size();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : all) best = std::min(best, EvaluateCandidate(rc, m).j);

    auto found = [&](double decay, Rng search) {
      AnnealingOptions ao;
      ao.decay = decay;
      ao.iters = kIters;
      const AnnealingResult sa = SimulatedAnnealing(rc, ao, search);
      const bool ok = std::abs(sa.best.j - best) <= 1e-12 * std::max(1.0, std::abs(best));
      return ok;
    };
    hits += found(stretched, rng);
    hits_default += found(cfg.sa_decay, rng);
  }
  r.pass = hits >= 95;
  r.detail = std::to_string(hits) + "/100 seeds reached the optimum over " +
             std::to_string(enumerated) + " feasible allocations (decay " + Fmt(stretched, 4) +
             "); unstretched decay " + Fmt(cfg.sa_decay, 3) + " gives " +
             std::to_string(hits_default) + "/100";
  return r;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

CheckResult Criterion10(const VerifyOptions& opt) {
  CheckResult r;
  namespace fs = std::filesystem;
  const fs::path root = opt.work_dir.empty() ? fs::temp_directory_path() / "cre_determinism"
                                             : fs::path(opt.work_dir) / "determinism";
  std::string first, second;
  for (int pass = 0; pass < 2; ++pass) {
    ExperimentSpec spec;
    spec.base = opt.base;
    spec.base.seed = 7;
    spec.base.rounds = std::min(opt.base.rounds, 40);
    spec.replicates = 2;
    spec.out_dir = (root / ("run" + std::to_string(pass))).string();
    fs::remove_all(spec.out_dir);
    const ExperimentResult res = RunExperiment(spec);
    (pass == 0 ? first : second) = ReadFile(res.aggregate_file);
  }
  r.pass = !first.empty() && first == second;
  r.detail = "aggregate CSV " + std::to_string(first.size()) + " bytes, " +
             (first == second ? "identical" : "DIFFERENT");
  return r;
}

bool SameSigFigs(double got, double want, int digits) {
  char a[40], b[40];
  std::snprintf(a, sizeof a, "%.*e", digits - 1, got);
  std::snprintf(b, sizeof b, "%.*e", digits - 1, want);
  return std::string(a) == b;
}

CheckResult Criterion11(const VerifyOptions& opt) {
  CheckResult r;
  const SystemConfig cfg = TableTwo(opt);
  const double t = EpochLatency(cfg, 1000);
  const double e = EpochEnergy(cfg, 1000);
  const double pl = PathLossDb(500.0, 2.0);
  const bool ok_t = SameSigFigs(t, 2e-4, 6);
  const bool ok_e = SameSigFigs(e, 2.5e-4, 6);
  const bool ok_pl = SameSigFigs(pl, 93.4002, 6);
  r.pass = ok_t && ok_e && ok_pl;
  r.detail = "T_i=" + Fmt(t, 6) + (ok_t ? " ok" : " MISMATCH") + ", E_i=" + Fmt(e, 6) +
             (ok_e ? " ok" : " MISMATCH") + ", PL=" + Fmt(pl, 6) + " dB vs 93.4002" +
             (ok_pl ? " ok" : " MISMATCH");
  return r;
}

CheckResult Criterion12(const VerifyOptions& opt) {
  CheckResult r;
  const SystemConfig cfg = TableTwo(opt);
  Rng rng = MakeRng(opt.base.seed, Stream::kInnerInit, 1212);
  double worst_tau = 0;
  for (int probe = 0; probe < 100; ++probe) {
    const InnerContext ctx = RandomInnerContext(rng, cfg);
    std::vector<double> p(ctx.size());
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      const double window = ctx.t_max - ctx.t_down - ctx.epoch_latency[k];
      p[k] = Uniform(rng, OracleMinPower(ctx, k, window), ctx.p_max);
    }
    const double tau = Uniform(rng, 0.5, 10.0);
    const double h = 1e-4;
    const double fd = (OracleJ2(tau + h, p, ctx) - OracleJ2(tau - h, p, ctx)) / (2 * h);
    const double an = J2TauDerivative(tau, p, ctx);
    worst_tau = std::max(worst_tau, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
  }

  DataSpec spec;
  spec.clients = 1;
  spec.mean_size = 60;
  spec.size_std = 0;
  spec.test_fraction = 0.0;
  double worst_grad = 0;
  for (int probe = 0; probe < 100; ++probe) {
    Rng drng = MakeRng(opt.base.seed + probe, Stream::kData, 1213);
    const Dataset ds = GenerateNonIidData(drng, spec).clients[0];
    ModelVector theta(ParameterCount(spec.feature_dim, spec.num_classes));
    std::normal_distribution<double> n01(0.0, 0.5);
    for (double& v : theta) v = n01(drng);
    const ModelVector g = Gradient(theta, ds);
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, theta.size() - 1)(drng);
    const double h = 1e-5;
    ModelVector plus = theta, minus = theta;
    plus[j] += h;
    minus[j] -= h;
    const double fd = (Loss(plus, ds) - Loss(minus, ds)) / (2 * h);
    worst_grad = std::max(worst_grad, std::abs(fd - g[j]) / std::max(std::abs(g[j]), 1e-3));
  }
  r.pass = worst_tau <= 1e-6 && worst_grad <= 1e-6;
  r.detail = "max rel error dJ2/dtau " + Fmt(worst_tau, 3) + ", loss gradient " +
             Fmt(worst_grad, 3) + " (100 probes each)";
  return r;
}

}  // namespace

double SpearmanCorrelation(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rk(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) rk[idx[k]] = avg;
      i = j + 1;
    }
    return rk;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

int MonotoneInversions(const std::vector<double>& v, bool increasing) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? v[i] < v[i - 1] : v[i] > v[i - 1]) ++n;
  }
  return n;
}

const std::vector<CheckSpec>& AcceptanceChecks() {
  static const std::vector<CheckSpec> checks = {
      {1, "inner solver vs grid search", false, Criterion1},
      {2, "power inverse energy identity", false, Criterion2},
      {3, "epoch rule cases", false, Criterion3},
      {4, "parameter-gap bounds on convex instances", false, Criterion4},
      {5, "loss bound tracks realized gap", true, Criterion5},
      {6, "virtual queue stability", true, Criterion6},
      {7, "V trade-off trend", true, Criterion7},
      {8, "CRE vs baselines", true, Criterion8},
      {9, "annealing finds enumerated optimum", false, Criterion9},
      {10, "deterministic aggregate output", true, Criterion10},
      {11, "golden arithmetic", false, Criterion11},
      {12, "gradient checks", false, Criterion12},
  };
  return checks;
}

CheckResult RunCheck(const CheckSpec& spec, const VerifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = spec.run(opt);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = spec.id;
  r.name = spec.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cre
