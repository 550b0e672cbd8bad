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

#include "cre/harness.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cre/channel.h"
#include "cre/error.h"

namespace cre {
namespace {

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string PointTag(const SweepPoint& p) {
  return "V" + Num(p.v) + "_d" + Num(p.d) + "_s" + Num(p.sigma);
}

}  // namespace

std::vector<double> PlaceClients(Rng& rng, int clients, double radius) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(clients);
  // 1 - u lies in (0, 1], so no client sits exactly on the base station.
  for (double& r : out) r = radius * std::sqrt(1.0 - unif(rng));
  return out;
}

World BuildWorld(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t replicate) {
  World w;
  Rng place = MakeRng(seed, Stream::kPlacement, replicate);
  const std::vector<double> dist = PlaceClients(place, cfg.num_clients, cfg.cell_radius_m);
  Rng data_rng = MakeRng(seed, Stream::kData, replicate);
  DataSpec ds;
  ds.clients = cfg.num_clients;
  ds.mean_size = cfg.mean_dataset_size;
  ds.size_std = cfg.dataset_size_std;
  ds.non_iid_degree = cfg.non_iid_degree;
  ds.num_classes = cfg.num_classes;
  ds.feature_dim = cfg.feature_dim;
  ds.class_separation = cfg.class_separation;
  ds.test_fraction = cfg.test_fraction;
  w.data = GenerateNonIidData(data_rng, ds);
  for (int i = 0; i < cfg.num_clients; ++i) {
    ClientProfile p;
    p.id = i;
    p.distance_m = dist[i];
    p.dataset_size = w.data.clients[i].size();
    p.non_iid_degree = cfg.non_iid_degree;
    w.profiles.push_back(p);
    w.large_scale.push_back(LargeScaleGain(dist[i], cfg.carrier_freq_ghz));
  }
  w.theta0.assign(ParameterCount(cfg.feature_dim, cfg.num_classes), 0.0);
  w.optimum = SolveCentralized(w.data.clients, w.theta0);
  return w;
}

std::vector<SweepPoint> ExpandSweep(const ExperimentSpec& spec) {
  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  std::vector<SweepPoint> out;
  for (double v : axis(spec.v_values, spec.base.v)) {
    for (double d : axis(spec.d_values, spec.base.non_iid_degree)) {
      for (double s : axis(spec.sigma_values, spec.base.dataset_size_std)) {
        out.push_back({v, d, s});
      }
    }
  }
  return out;
}

std::vector<RoundMetrics> RunReplicate(const SystemConfig& cfg, SchedulerKind kind,
                                       std::uint64_t replicate) {
  Simulation sim(cfg, BuildWorld(cfg, cfg.seed, replicate),
                 MakeScheduler(kind, cfg, cfg.seed, replicate), cfg.seed, replicate);
  std::vector<RoundMetrics> out;
  out.reserve(cfg.rounds);
  for (int n = 0; n < cfg.rounds; ++n) out.push_back(sim.RunRound());
  return out;
}

void WriteMetricsHeader(std::ostream& out, int clients, bool wide) {
  out << "round,scheduler,V,d,sigma_size,replicate,loss,accuracy,bound,J,tau,"
         "num_participants,round_energy_J,cum_energy_J,max_Z";
  if (wide) {
    for (int i = 0; i < clients; ++i) {
      out << ",a_" << i << ",channel_" << i << ",p_" << i << ",energy_" << i << ",Z_" << i;
    }
  }
  out << '\n';
}

void WriteMetricsRow(std::ostream& out, const RoundMetrics& m, std::string_view scheduler,
                     const SweepPoint& pt, int replicate, bool wide) {
  int participants = 0;
  for (int a : m.participants) participants += a;
  out << m.round << ',' << scheduler << ',' << Num(pt.v) << ',' << Num(pt.d) << ','
      << Num(pt.sigma) << ',' << replicate << ',' << Num(m.global_loss) << ','
      << Num(m.test_accuracy) << ',' << Num(m.bound_value) << ',' << Num(m.objective_j) << ','
      << m.tau << ',' << participants << ',' << Num(m.round_energy_j) << ','
      << Num(m.cumulative_energy_j) << ',' << Num(m.max_queue_j);
  if (wide) {
    for (std::size_t i = 0; i < m.participants.size(); ++i) {
      out << ',' << m.participants[i] << ',' << m.channel_of[i] << ',' << Num(m.p_up[i]) << ','
          << Num(m.energy_j[i]) << ',' << Num(m.queue_j[i]);
    }
  }
  out << '\n';
}

std::string VersionString() {
#ifdef CRE_VERSION
  return CRE_VERSION;
#else
  return "0.0.0-unknown";
#endif
}

ExperimentResult RunExperiment(const ExperimentSpec& spec) {
  if (spec.replicates < 1) throw Error(ErrorCode::kUsage, "replicates must be >= 1");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + spec.out_dir + ": " + ec.message());

  const std::string sched(SchedulerName(spec.scheduler));
  ExperimentResult result;
  for (const SweepPoint& pt : ExpandSweep(spec)) {
    RawConfig raw = spec.base;
    raw.v = pt.v;
    raw.non_iid_degree = pt.d;
    raw.dataset_size_std = pt.sigma;
    const SystemConfig cfg = ValidateConfig(raw);
    for (int rep = 0; rep < spec.replicates; ++rep) {
      RunSummary run;
      run.point = pt;
      run.replicate = rep;
      run.file = (fs::path(spec.out_dir) /
                  (sched + "_" + PointTag(pt) + "_rep" + std::to_string(rep) + ".csv"))
                     .string();
      try {
        run.rounds = RunReplicate(cfg, spec.scheduler, rep);
      } catch (const Error& e) {
        run.ok = false;
        run.error = e.what();
        std::cerr << "replicate " << rep << " at " << PointTag(pt) << " failed: " << e.what()
                  << '\n';
      }
      std::ofstream f(run.file);
      if (!f) throw Error(ErrorCode::kIo, "cannot write " + run.file);
      WriteMetricsHeader(f, cfg.num_clients, spec.wide);
      for (const auto& m : run.rounds) WriteMetricsRow(f, m, sched, pt, rep, spec.wide);
      result.runs.push_back(std::move(run));
    }
  }

  // Per-round means across successful replicates of each sweep point.
  result.aggregate_file = (fs::path(spec.out_dir) / (sched + "_aggregate.csv")).string();
  std::ofstream agg(result.aggregate_file);
  if (!agg) throw Error(ErrorCode::kIo, "cannot write " + result.aggregate_file);
  agg << "round,scheduler,V,d,sigma_size,replicates,loss,accuracy,bound,J,tau,"
         "num_participants,round_energy_J,cum_energy_J,max_Z\n";
  for (const SweepPoint& pt : ExpandSweep(spec)) {
    std::vector<const RunSummary*> ok;
    for (const auto& r : result.runs) {
      if (r.ok && r.point.v == pt.v && r.point.d == pt.d && r.point.sigma == pt.sigma) {
        ok.push_back(&r);
      }
    }
    if (ok.empty()) continue;
    const std::size_t rounds = ok[0]->rounds.size();
    for (std::size_t n = 0; n < rounds; ++n) {
      double s[9] = {};
      for (const RunSummary* r : ok) {
        const RoundMetrics& m = r->rounds[n];
        int np = 0;
        for (int a : m.participants) np += a;
        const double row[9] = {m.global_loss,     m.test_accuracy,  m.bound_value,
                               m.objective_j,     double(m.tau),    double(np),
                               m.round_energy_j,  m.cumulative_energy_j, m.max_queue_j};
        for (int k = 0; k < 9; ++k) s[k] += row[k];
      }
      agg << n + 1 << ',' << sched << ',' << Num(pt.v) << ',' << Num(pt.d) << ','
          << Num(pt.sigma) << ',' << ok.size();
      for (double v : s) agg << ',' << Num(v / ok.size());
      agg << '\n';
    }
  }

  nlohmann::json man;
  man["version"] = VersionString();
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, ConfigHash(spec.base));
  man["config_hash"] = hash;
  man["master_seed"] = spec.base.seed;
  man["scheduler"] = sched;
  man["replicates"] = spec.replicates;
  man["aggregate"] = fs::path(result.aggregate_file).filename().string();
  for (const auto& r : result.runs) {
    nlohmann::json j;
    j["file"] = fs::path(r.file).filename().string();
    j["V"] = r.point.v;
    j["d"] = r.point.d;
    j["sigma_size"] = r.point.sigma;
    j["replicate"] = r.replicate;
    j["seed"] = {spec.base.seed, r.replicate};
    j["ok"] = r.ok;
    if (!r.ok) j["error"] = r.error;
    man["runs"].push_back(j);
  }
  std::ostringstream cfg_text;
  WriteConfig(cfg_text, spec.base);
  man["config"] = cfg_text.str();
  result.manifest_file = (fs::path(spec.out_dir) / (sched + "_manifest.json")).string();
  std::ofstream mf(result.manifest_file);
  if (!mf) throw Error(ErrorCode::kIo, "cannot write " + result.manifest_file);
  mf << man.dump(2) << '\n';
  return result;
}

}  // namespace cre
