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

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "cre/error.h"
#include "cre/fl_engine.h"
#include "cre/kernels.h"
#include "doctest.h"
#include "test_util.h"

using cre::testing::RelClose;

namespace {

cre::FederatedData Make(std::uint64_t seed, double d, int clients = 4, double mean = 200) {
  cre::Rng rng = cre::MakeRng(seed, cre::Stream::kData);
  cre::DataSpec spec;
  spec.clients = clients;
  spec.mean_size = mean;
  spec.size_std = mean / 10;
  spec.non_iid_degree = d;
  return cre::GenerateNonIidData(rng, spec);
}

cre::ModelVector RandomTheta(std::uint64_t seed, int f = 16, int k = 10) {
  cre::Rng rng = cre::MakeRng(seed, cre::Stream::kInnerInit);
  std::normal_distribution<double> n(0.0, 0.3);
  cre::ModelVector t(cre::ParameterCount(f, k));
  for (double& v : t) v = n(rng);
  return t;
}

}  // namespace

TEST_CASE("non-iid partitions") {
  const auto pure = Make(1, 1.0, 10);
  for (int i = 0; i < 10; ++i) {
    const std::set<int> labels(pure.clients[i].y.begin(), pure.clients[i].y.end());
    CHECK(labels == std::set<int>{i});
  }
  const auto mixed = Make(1, 0.0, 10, 1000);
  for (const auto& ds : mixed.clients) {
    std::vector<int> count(10, 0);
    for (int y : ds.y) ++count[y];
    // labels are drawn, so allow five binomial standard deviations
    const double sd = std::sqrt(ds.size() * 0.1 * 0.9);
    for (int c : count) CHECK(std::abs(c - ds.size() / 10.0) <= 5 * sd);
  }
}

TEST_CASE("dataset sizes") {
  cre::Rng rng = cre::MakeRng(8, cre::Stream::kData);
  cre::DataSpec spec;
  const auto a = cre::GenerateNonIidData(rng, spec);
  cre::Rng rng2 = cre::MakeRng(8, cre::Stream::kData);
  const auto b = cre::GenerateNonIidData(rng2, spec);
  double sum = 0;
  for (std::size_t i = 0; i < a.clients.size(); ++i) {
    CHECK(a.clients[i].size() == b.clients[i].size());
    CHECK(a.clients[i].x == b.clients[i].x);
    sum += a.clients[i].size();
  }
  CHECK(std::abs(sum / 10 - 1000) <= 3 * 100 / std::sqrt(10.0));
  CHECK(a.test.size() > 0);

  spec.clients = 11;
  spec.non_iid_degree = 0.5;
  cre::Rng rng3 = cre::MakeRng(8, cre::Stream::kData);
  CHECK_THROWS_AS(cre::GenerateNonIidData(rng3, spec), cre::Error);
}

TEST_CASE("dataset export round trip") {
  const auto data = Make(2, 0.4);
  std::stringstream buf;
  cre::ExportDatasets(buf, data.clients);
  const auto back = cre::ImportDatasets(buf);
  REQUIRE(back.size() == data.clients.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].y == data.clients[i].y);
    CHECK(back[i].x == data.clients[i].x);
  }
}

TEST_CASE("loss gradient against finite differences") {
  const auto data = Make(3, 0.4, 1);
  const auto theta = RandomTheta(3);
  const auto g = cre::Gradient(theta, data.clients[0]);
  for (std::size_t j = 0; j < theta.size(); j += 7) {
    auto up = theta, dn = theta;
    up[j] += 1e-5;
    dn[j] -= 1e-5;
    const double fd = (cre::Loss(up, data.clients[0]) - cre::Loss(dn, data.clients[0])) / 2e-5;
    CHECK(RelClose(g[j], fd, 1e-6, 1e-9));
  }
  cre::ModelVector g2;
  CHECK(cre::LossAndGradient(theta, data.clients[0], &g2) == cre::Loss(theta, data.clients[0]));
  CHECK(g2 == g);
}

TEST_CASE("local training") {
  const auto data = Make(4, 0.4, 1);
  const auto theta = RandomTheta(4);
  const auto frozen = cre::LocalTrain(theta, data.clients[0], 5, 0.0);
  CHECK(frozen.trajectory.back() == theta);
  CHECK(frozen.trajectory.size() == 6);
  CHECK(frozen.gradients.size() == 5);

  const auto run = cre::LocalTrain(theta, data.clients[0], 30, 0.1);
  for (std::size_t m = 1; m < run.trajectory.size(); ++m) {
    CHECK(cre::Loss(run.trajectory[m], data.clients[0]) <
          cre::Loss(run.trajectory[m - 1], data.clients[0]));
  }
}

TEST_CASE("aggregation and losses") {
  const cre::ModelVector zero(3, 0.0), four(3, 4.0);
  const std::vector<cre::ModelVector> models{zero, four};
  const std::vector<double> w{0.25, 0.75};
  CHECK(cre::Aggregate(models, w) == cre::ModelVector(3, 3.0));
  const std::vector<double> only_second{0.0, 1.0};
  CHECK(cre::Aggregate(models, only_second) == four);
  const std::vector<cre::ModelVector> same{four, four};
  CHECK(cre::Aggregate(same, w) == four);

  const auto data = Make(5, 0.6);
  const auto theta = RandomTheta(5);
  const double pooled = cre::Loss(theta, cre::Pool(data.clients));
  CHECK(RelClose(cre::GlobalLoss(theta, data.clients), pooled, 1e-10));
  const std::vector<int> all(data.clients.size(), 1);
  CHECK(RelClose(cre::ParticipationLoss(theta, data.clients, all), pooled, 1e-10));
  const std::vector<int> some{1, 0, 1, 0};
  const cre::Dataset sub[] = {data.clients[0], data.clients[2]};
  CHECK(RelClose(cre::ParticipationLoss(theta, data.clients, some), cre::Loss(theta, cre::Pool(sub)), 1e-10));
}

TEST_CASE("auxiliary trajectory") {
  const auto data = Make(6, 0.6);
  const auto theta = RandomTheta(6);
  const std::vector<int> one{0, 0, 1, 0};
  const auto phi = cre::AuxiliaryTrajectory(theta, data.clients, one, 6, 0.1);
  const auto local = cre::LocalTrain(theta, data.clients[2], 6, 0.1).trajectory;
  for (int m = 0; m <= 6; ++m) CHECK(cre::kernels::SquaredDistance(phi[m], local[m]) < 1e-24);

  const std::vector<int> all{1, 1, 1, 1};
  const auto still = cre::AuxiliaryTrajectory(theta, data.clients, all, 4, 0.0);
  for (const auto& p : still) CHECK(p == theta);
}

TEST_CASE("centralized optimum") {
  const auto data = Make(7, 0.4);
  const cre::ModelVector theta0(cre::ParameterCount(16, 10), 0.0);
  const auto opt = cre::SolveCentralized(data.clients, theta0);
  CHECK(opt.grad_norm <= 1e-6);
  CHECK(opt.loss <= cre::GlobalLoss(theta0, data.clients));
  CHECK(RelClose(cre::GlobalLoss(opt.theta, data.clients), opt.loss, 1e-12));
}
