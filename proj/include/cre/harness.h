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

// Experiment runner: builds worlds from a config, runs replicates over
// sweep points and writes per-run CSVs, an aggregate CSV and a manifest.

#ifndef CRE_HARNESS_H_
#define CRE_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cre/config.h"
#include "cre/rng.h"
#include "cre/simulation.h"

namespace cre {

// Distances uniform over a disk of the given radius, all in (0, radius].
std::vector<double> PlaceClients(Rng& rng, int clients, double radius);

World BuildWorld(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t replicate);

struct ExperimentSpec {
  RawConfig base;
  SchedulerKind scheduler = SchedulerKind::kCre;
  // Empty axis means "the base config value".
  std::vector<double> v_values;
  std::vector<double> d_values;
  std::vector<double> sigma_values;
  int replicates = 1;
  std::string out_dir = "out";
  bool wide = false;
};

struct SweepPoint {
  double v = 0;
  double d = 0;
  double sigma = 0;
};

std::vector<SweepPoint> ExpandSweep(const ExperimentSpec& spec);

struct RunSummary {
  SweepPoint point;
  int replicate = 0;
  std::string file;
  bool ok = true;
  std::string error;
  std::vector<RoundMetrics> rounds;
};

struct ExperimentResult {
  std::vector<RunSummary> runs;
  std::string aggregate_file;
  std::string manifest_file;
};

// Runs the full product of sweep points and replicates. A failing replicate
// is logged to stderr and recorded in the manifest; the others still run.
ExperimentResult RunExperiment(const ExperimentSpec& spec);

// Runs one replicate in memory without writing files.
std::vector<RoundMetrics> RunReplicate(const SystemConfig& cfg, SchedulerKind kind,
                                       std::uint64_t replicate);

void WriteMetricsHeader(std::ostream& out, int clients, bool wide);
void WriteMetricsRow(std::ostream& out, const RoundMetrics& m, std::string_view scheduler,
                     const SweepPoint& pt, int replicate, bool wide);

std::string VersionString();

}  // namespace cre

#endif  // CRE_HARNESS_H_
