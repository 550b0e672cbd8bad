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

// Command-line front end: run experiments, sweep V, run acceptance checks.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cre/config.h"
#include "cre/error.h"
#include "cre/harness.h"
#include "cre/kernels.h"
#include "cre/simulation.h"
#include "cre/verification.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::string out = "out";
  std::string scheduler = "cre";
  int replicates = 1;
  bool wide = false;
  std::string kernels;
};

void AddCommon(CLI::App* app, Common& c, bool with_scheduler) {
  app->add_option("--config", c.config, "INI config file (defaults when omitted)");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--rounds", c.rounds, "number of rounds")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "output directory");
  if (with_scheduler) {
    app->add_option("--scheduler", c.scheduler,
                    "scheduler: " + std::string(cre::SchedulerNameList()));
  }
  app->add_option("--replicates", c.replicates, "replicates per point")
      ->check(CLI::PositiveNumber);
  app->add_flag("--wide", c.wide, "per-client columns in CSVs");
  app->add_option("--kernels", c.kernels, "force kernel backend: scalar or avx2");
}

cre::RawConfig LoadBase(const Common& c) {
  cre::RawConfig raw = c.config.empty() ? cre::RawConfig{} : cre::LoadConfigFile(c.config);
  if (c.seed) raw.seed = *c.seed;
  if (c.rounds) raw.rounds = *c.rounds;
  cre::ValidateConfig(raw);
  return raw;
}

void ApplyKernels(const Common& c) {
  if (c.kernels == "scalar") cre::kernels::SetBackend(cre::kernels::Backend::kScalar);
  if (c.kernels == "avx2") cre::kernels::SetBackend(cre::kernels::Backend::kAvx2);
}

int RunSpec(cre::ExperimentSpec spec) {
  const cre::ExperimentResult res = cre::RunExperiment(spec);
  int failed = 0;
  for (const auto& r : res.runs) failed += !r.ok;
  std::printf("%zu runs, %d failed\naggregate: %s\nmanifest:  %s\n", res.runs.size(), failed,
              res.aggregate_file.c_str(), res.manifest_file.c_str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CRE federated scheduling simulator " + cre::VersionString()};
  app.require_subcommand(1);
  app.set_version_flag("--version", cre::VersionString());

  Common run_opts, sweep_opts, verify_opts;
  auto* run = app.add_subcommand("run", "run one scheduler over the configured rounds");
  AddCommon(run, run_opts, true);

  auto* sweep = app.add_subcommand("sweep-v", "sweep the Lyapunov weight V");
  AddCommon(sweep, sweep_opts, true);
  std::vector<double> v_values{0.01, 0.1, 1.0, 10.0};
  sweep->add_option("--v-values", v_values, "V values to sweep")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  AddCommon(verify, verify_opts, false);
  bool all = false;
  std::vector<int> only;
  verify->add_flag("--all", all, "include the long-running checks");
  verify->add_option("--only", only, "check ids to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *sweep) {
      const Common& c = *run ? run_opts : sweep_opts;
      ApplyKernels(c);
      cre::SchedulerKind kind;
      if (auto k = cre::ParseScheduler(c.scheduler)) {
        kind = *k;
      } else {
        std::fprintf(stderr, "unknown scheduler '%s'; valid names: %s\n", c.scheduler.c_str(),
                     std::string(cre::SchedulerNameList()).c_str());
        return 2;
      }
      cre::ExperimentSpec spec;
      spec.base = LoadBase(c);
      spec.scheduler = kind;
      spec.replicates = c.replicates;
      spec.out_dir = c.out;
      spec.wide = c.wide;
      if (*sweep) spec.v_values = v_values;
      return RunSpec(spec);
    }

    ApplyKernels(verify_opts);
    cre::VerifyOptions opt;
    opt.base = LoadBase(verify_opts);
    opt.work_dir = verify_opts.out;
    std::printf("kernels: %s\n",
                std::string(cre::kernels::BackendName(cre::kernels::ActiveBackend())).c_str());
    int failed = 0;
    for (const auto& check : cre::AcceptanceChecks()) {
      const bool selected =
          only.empty() ? (all || !check.long_running)
                       : std::find(only.begin(), only.end(), check.id) != only.end();
      if (!selected) continue;
      const cre::CheckResult r = cre::RunCheck(check, opt);
      std::printf("[%s] criterion %2d: %s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.detail.c_str());
      std::fflush(stdout);
      failed += !r.pass;
    }
    return failed == 0 ? 0 : 1;
  } catch (const cre::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
