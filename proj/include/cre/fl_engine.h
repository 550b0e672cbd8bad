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

// Learning side of the simulator: synthetic non-IID data, multinomial
// logistic regression trained by full-batch gradient descent, aggregation
// and the centralized reference trajectories.

#ifndef CRE_FL_ENGINE_H_
#define CRE_FL_ENGINE_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cre/rng.h"

namespace cre {

using ModelVector = std::vector<double>;

struct Dataset {
  int feature_dim = 0;
  int num_classes = 0;
  int owner = -1;  // client id, -1 for pooled/test
  std::vector<double> x;  // row-major, size() x feature_dim
  std::vector<int> y;

  int size() const { return static_cast<int>(y.size()); }
  std::span<const double> row(int r) const {
    return {x.data() + static_cast<std::size_t>(r) * feature_dim,
            static_cast<std::size_t>(feature_dim)};
  }
};

struct DataSpec {
  int clients = 10;
  double mean_size = 1000;
  double size_std = 100;
  double non_iid_degree = 0.4;
  int num_classes = 10;
  int feature_dim = 16;
  double class_separation = 3.0;
  double test_fraction = 0.1;
};

struct FederatedData {
  std::vector<Dataset> clients;
  Dataset test;
};

// Client i gets round(d D_i) samples of class i and the rest from the
// uniform class mixture. Throws kInvalidDegree or kTooManyClients.
FederatedData GenerateNonIidData(Rng& rng, const DataSpec& spec);

Dataset Pool(std::span<const Dataset> parts);

// Text export: header line "cre-dataset <feature_dim> <num_classes> <parts>",
// then per part "part <owner> <rows>" and one "label f0 f1 ..." line per row.
void ExportDatasets(std::ostream& out, std::span<const Dataset> parts);
std::vector<Dataset> ImportDatasets(std::istream& in);

// Parameters are num_classes x (feature_dim + 1), bias in the last column.
int ParameterCount(int feature_dim, int num_classes);

// Mean cross-entropy. Gradient is written to grad when non-null.
double LossAndGradient(const ModelVector& theta, const Dataset& ds, ModelVector* grad);
double Loss(const ModelVector& theta, const Dataset& ds);
ModelVector Gradient(const ModelVector& theta, const Dataset& ds);
double Accuracy(const ModelVector& theta, const Dataset& ds);

struct LocalTrainResult {
  ModelVector theta;
  std::vector<ModelVector> trajectory;  // theta^0 .. theta^tau
  std::vector<ModelVector> gradients;   // gradient at theta^0 .. theta^{tau-1}
};

// tau full-batch steps. Throws kNonFiniteLoss on divergence.
LocalTrainResult LocalTrain(const ModelVector& theta0, const Dataset& ds, int tau, double eta);

// sum_i w_tilde_i theta_i over the given models.
ModelVector Aggregate(std::span<const ModelVector> models, std::span<const double> w_tilde);

double WeightedLoss(const ModelVector& theta, std::span<const Dataset> datasets,
                    std::span<const double> weights);
ModelVector WeightedGradient(const ModelVector& theta, std::span<const Dataset> datasets,
                             std::span<const double> weights);
// Weighted by data share over every client.
double GlobalLoss(const ModelVector& theta, std::span<const Dataset> datasets);
// Weighted over participants only; throws kEmptyParticipation.
double ParticipationLoss(const ModelVector& theta, std::span<const Dataset> datasets,
                         std::span<const int> a);

// Centralized descent on the participation loss from theta0; phi^0..phi^tau.
std::vector<ModelVector> AuxiliaryTrajectory(const ModelVector& theta0,
                                             std::span<const Dataset> datasets,
                                             std::span<const int> a, int tau, double eta);

struct CentralizedOptimum {
  ModelVector theta;
  double loss = 0;
  double grad_norm = 0;
  int iterations = 0;
};

// Accelerated gradient descent with adaptive restart on the pooled loss,
// stopping at gradient norm tol or max_iters.
CentralizedOptimum SolveCentralized(std::span<const Dataset> datasets, const ModelVector& theta0,
                                    double tol = 1e-6, int max_iters = 20000);

}  // namespace cre

#endif  // CRE_FL_ENGINE_H_
