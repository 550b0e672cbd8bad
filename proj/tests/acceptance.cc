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

// Prints one PASS/FAIL line per acceptance criterion. With no arguments all
// twelve run; --only 3,5 runs a subset (ctest passes a single id).

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "cre/verification.h"

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") != 0 || i + 1 >= argc) continue;
    std::stringstream ids(argv[++i]);
    for (std::string id; std::getline(ids, id, ',');) only.insert(std::atoi(id.c_str()));
  }
  cre::VerifyOptions opt;
  opt.work_dir = (std::filesystem::temp_directory_path() / "cre_acceptance").string();
  int failed = 0;
  for (const auto& check : cre::AcceptanceChecks()) {
    if (!only.empty() && !only.contains(check.id)) continue;
    const cre::CheckResult r = cre::RunCheck(check, opt);
    std::printf("criterion %2d %s: %s [%.1fs] %s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
