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

#ifndef CRE_LAMBERT_W_H_
#define CRE_LAMBERT_W_H_

namespace cre {

// Lower real branch W_{-1} of the Lambert W function on [-1/e, 0).
// Returns w <= -1 with w e^w = x. Throws kDomainError outside the domain.
double LambertWm1(double x);

}  // namespace cre

#endif  // CRE_LAMBERT_W_H_
