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

// Numerical acceptance checks. Each check builds its own oracle (grid
// search, enumeration, finite differences, direct simulation) and compares
// it with the library under test.

#ifndef CRE_VERIFICATION_H_
#define CRE_VERIFICATION_H_

#include <functional>
#include <string>
#include <vector>

#include "cre/config.h"

namespace cre {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  RawConfig base;        // Table II defaults unless a config is supplied
  std::string work_dir;  // scratch space for file-producing checks
};

struct CheckSpec {
  int id;
  std::string name;
  bool long_running;
  std::function<CheckResult(const VerifyOptions&)> run;
};

const std::vector<CheckSpec>& AcceptanceChecks();

CheckResult RunCheck(const CheckSpec& spec, const VerifyOptions& opt);

// Spearman rank correlation with average ranks for ties.
double SpearmanCorrelation(const std::vector<double>& x, const std::vector<double>& y);

// Count of adjacent pairs that break the requested monotone direction.
int MonotoneInversions(const std::vector<double>& v, bool increasing);

}  // namespace cre

#endif  // CRE_VERIFICATION_H_
