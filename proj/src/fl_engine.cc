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

#include "cre/fl_engine.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cre/error.h"
#include "cre/kernels.h"

namespace cre {
namespace {

void SampleRow(Rng& rng, const DataSpec& spec, int label, Dataset& ds) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double off = spec.class_separation / spec.num_classes;
  for (int f = 0; f < spec.feature_dim; ++f) {
    double mean = 0;
    // Class means on a scaled, centred simplex spanning the first K dims.
    if (f < spec.num_classes) mean = (f == label ? spec.class_separation : 0.0) - off;
    ds.x.push_back(mean + n01(rng));
  }
  ds.y.push_back(label);
}

Dataset Empty(const DataSpec& spec, int owner) {
  Dataset ds;
  ds.feature_dim = spec.feature_dim;
  ds.num_classes = spec.num_classes;
  ds.owner = owner;
  return ds;
}

// Softmax of logits in place; returns log-sum-exp.
double Softmax(std::span<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0;
  for (double& v : z) {
    v = std::exp(v - m);
    s += v;
  }
  for (double& v : z) v /= s;
  return m + std::log(s);
}

}  // namespace

FederatedData GenerateNonIidData(Rng& rng, const DataSpec& spec) {
  if (!(spec.non_iid_degree >= 0.0 && spec.non_iid_degree <= 1.0)) {
    throw Error(ErrorCode::kInvalidDegree, "non-IID degree must lie in [0, 1]");
  }
  if (spec.non_iid_degree > 0 && spec.clients > spec.num_classes) {
    throw Error(ErrorCode::kTooManyClients, "one private class per client needs U <= classes");
  }
  FederatedData out;
  std::normal_distribution<double> size_dist(spec.mean_size, spec.size_std);
  std::uniform_int_distribution<int> any_class(0, spec.num_classes - 1);
  std::vector<int> sizes(spec.clients);
  for (int& d : sizes) {
    d = std::max(10, static_cast<int>(std::lround(size_dist(rng))));
  }
  long long total = 0;
  for (int i = 0; i < spec.clients; ++i) {
    Dataset ds = Empty(spec, i);
    const int own = static_cast<int>(std::lround(spec.non_iid_degree * sizes[i]));
    for (int r = 0; r < own; ++r) SampleRow(rng, spec, i, ds);
    for (int r = own; r < sizes[i]; ++r) SampleRow(rng, spec, any_class(rng), ds);
    total += sizes[i];
    out.clients.push_back(std::move(ds));
  }
  out.test = Empty(spec, -1);
  const long long test_rows = std::llround(spec.test_fraction / (1.0 - spec.test_fraction) * total);
  for (long long r = 0; r < test_rows; ++r) {
    SampleRow(rng, spec, static_cast<int>(r % spec.num_classes), out.test);
  }
  return out;
}

Dataset Pool(std::span<const Dataset> parts) {
  Dataset ds;
  if (parts.empty()) return ds;
  ds.feature_dim = parts[0].feature_dim;
  ds.num_classes = parts[0].num_classes;
  for (const auto& p : parts) {
    ds.x.insert(ds.x.end(), p.x.begin(), p.x.end());
    ds.y.insert(ds.y.end(), p.y.begin(), p.y.end());
  }
  return ds;
}

void ExportDatasets(std::ostream& out, std::span<const Dataset> parts) {
  const int f = parts.empty() ? 0 : parts[0].feature_dim;
  const int k = parts.empty() ? 0 : parts[0].num_classes;
  out << "cre-dataset " << f << ' ' << k << ' ' << parts.size() << '\n';
  out.precision(17);
  for (const auto& p : parts) {
    out << "part " << p.owner << ' ' << p.size() << '\n';
    for (int r = 0; r < p.size(); ++r) {
      out << p.y[r];
      for (double v : p.row(r)) out << ' ' << v;
      out << '\n';
    }
  }
}

std::vector<Dataset> ImportDatasets(std::istream& in) {
  std::string tag;
  int f = 0, k = 0;
  std::size_t n = 0;
  if (!(in >> tag >> f >> k >> n) || tag != "cre-dataset") {
    throw Error(ErrorCode::kParse, "missing dataset header");
  }
  std::vector<Dataset> parts(n);
  for (auto& p : parts) {
    int rows = 0;
    if (!(in >> tag >> p.owner >> rows) || tag != "part") {
      throw Error(ErrorCode::kParse, "bad part header");
    }
    p.feature_dim = f;
    p.num_classes = k;
    p.y.resize(rows);
    p.x.resize(static_cast<std::size_t>(rows) * f);
    for (int r = 0; r < rows; ++r) {
      in >> p.y[r];
      for (int c = 0; c < f; ++c) in >> p.x[static_cast<std::size_t>(r) * f + c];
    }
    if (!in) throw Error(ErrorCode::kParse, "truncated dataset");
  }
  return parts;
}

int ParameterCount(int feature_dim, int num_classes) {
  return num_classes * (feature_dim + 1);
}

double LossAndGradient(const ModelVector& theta, const Dataset& ds, ModelVector* grad) {
  const int f = ds.feature_dim;
  const int k = ds.num_classes;
  const std::size_t stride = static_cast<std::size_t>(f) + 1;
  if (grad) grad->assign(theta.size(), 0.0);
  if (ds.size() == 0) return 0.0;
  std::vector<double> z(k);
  double loss = 0;
  for (int r = 0; r < ds.size(); ++r) {
    const auto x = ds.row(r);
    for (int c = 0; c < k; ++c) {
      const double* w = theta.data() + c * stride;
      z[c] = kernels::Dot({w, static_cast<std::size_t>(f)}, x) + w[f];
    }
    const int y = ds.y[r];
    const double zy = z[y];
    loss += Softmax(z) - zy;
    if (grad) {
      z[y] -= 1.0;
      for (int c = 0; c < k; ++c) {
        double* g = grad->data() + c * stride;
        kernels::Axpy(z[c], x, {g, static_cast<std::size_t>(f)});
        g[f] += z[c];
      }
    }
  }
  const double inv = 1.0 / ds.size();
  if (grad) {
    for (double& g : *grad) g *= inv;
  }
  return loss * inv;
}

double Loss(const ModelVector& theta, const Dataset& ds) {
  return LossAndGradient(theta, ds, nullptr);
}

ModelVector Gradient(const ModelVector& theta, const Dataset& ds) {
  ModelVector g;
  LossAndGradient(theta, ds, &g);
  return g;
}

double Accuracy(const ModelVector& theta, const Dataset& ds) {
  if (ds.size() == 0) return 0.0;
  const int f = ds.feature_dim;
  const std::size_t stride = static_cast<std::size_t>(f) + 1;
  int hits = 0;
  for (int r = 0; r < ds.size(); ++r) {
    int best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < ds.num_classes; ++c) {
      const double* w = theta.data() + c * stride;
      const double z = kernels::Dot({w, static_cast<std::size_t>(f)}, ds.row(r)) + w[f];
      if (z > best_z) {
        best_z = z;
        best = c;
      }
    }
    hits += best == ds.y[r];
  }
  return static_cast<double>(hits) / ds.size();
}

LocalTrainResult LocalTrain(const ModelVector& theta0, const Dataset& ds, int tau, double eta) {
  LocalTrainResult res;
  res.theta = theta0;
  res.trajectory.push_back(theta0);
  ModelVector g;
  for (int m = 0; m < tau; ++m) {
    const double loss = LossAndGradient(res.theta, ds, &g);
    if (!std::isfinite(loss)) throw Error(ErrorCode::kNonFiniteLoss, "local loss diverged");
    kernels::Axpy(-eta, g, res.theta);
    res.gradients.push_back(g);
    res.trajectory.push_back(res.theta);
  }
  return res;
}

ModelVector Aggregate(std::span<const ModelVector> models, std::span<const double> w_tilde) {
  ModelVector out(models.empty() ? 0 : models[0].size(), 0.0);
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (w_tilde[i] != 0.0) kernels::Axpy(w_tilde[i], models[i], out);
  }
  return out;
}

double WeightedLoss(const ModelVector& theta, std::span<const Dataset> datasets,
                    std::span<const double> weights) {
  double s = 0;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (weights[i] != 0.0) s += weights[i] * Loss(theta, datasets[i]);
  }
  return s;
}

ModelVector WeightedGradient(const ModelVector& theta, std::span<const Dataset> datasets,
                             std::span<const double> weights) {
  ModelVector out(theta.size(), 0.0), g;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (weights[i] == 0.0) continue;
    LossAndGradient(theta, datasets[i], &g);
    kernels::Axpy(weights[i], g, out);
  }
  return out;
}

namespace {

std::vector<double> ShareWeights(std::span<const Dataset> datasets, std::span<const int> a) {
  std::vector<double> w(datasets.size(), 0.0);
  double total = 0;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (a.empty() || a[i]) total += datasets[i].size();
  }
  if (total == 0) throw Error(ErrorCode::kEmptyParticipation, "no participant data");
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (a.empty() || a[i]) w[i] = datasets[i].size() / total;
  }
  return w;
}

}  // namespace

double GlobalLoss(const ModelVector& theta, std::span<const Dataset> datasets) {
  return WeightedLoss(theta, datasets, ShareWeights(datasets, {}));
}

double ParticipationLoss(const ModelVector& theta, std::span<const Dataset> datasets,
                         std::span<const int> a) {
  return WeightedLoss(theta, datasets, ShareWeights(datasets, a));
}

std::vector<ModelVector> AuxiliaryTrajectory(const ModelVector& theta0,
                                             std::span<const Dataset> datasets,
                                             std::span<const int> a, int tau, double eta) {
  const std::vector<double> w = ShareWeights(datasets, a);
  std::vector<ModelVector> phi{theta0};
  for (int m = 0; m < tau; ++m) {
    ModelVector next = phi.back();
    kernels::Axpy(-eta, WeightedGradient(next, datasets, w), next);
    phi.push_back(std::move(next));
  }
  return phi;
}

CentralizedOptimum SolveCentralized(std::span<const Dataset> datasets, const ModelVector& theta0,
                                    double tol, int max_iters) {
  const Dataset pooled = Pool(datasets);
  // Softmax curvature is at most 1/2 times the second moment of [x, 1].
  const int f = pooled.feature_dim;
  std::vector<double> v(f + 1, 1.0), mv(f + 1);
  double lambda = 1.0;
  for (int it = 0; it < 100; ++it) {
    std::fill(mv.begin(), mv.end(), 0.0);
    for (int r = 0; r < pooled.size(); ++r) {
      const auto x = pooled.row(r);
      const double s = kernels::Dot(x, {v.data(), static_cast<std::size_t>(f)}) + v[f];
      kernels::Axpy(s, x, {mv.data(), static_cast<std::size_t>(f)});
      mv[f] += s;
    }
    lambda = std::sqrt(kernels::SquaredNorm(mv)) / std::max(pooled.size(), 1);
    const double nrm = std::sqrt(kernels::SquaredNorm(mv));
    for (int c = 0; c <= f; ++c) v[c] = mv[c] / nrm;
  }
  const double step = 1.0 / (0.5 * lambda * 1.05);

  CentralizedOptimum out;
  ModelVector x = theta0, y = theta0, x_prev = theta0, g;
  double t = 1.0;
  double fx = LossAndGradient(x, pooled, &g);
  for (int it = 0; it < max_iters; ++it) {
    out.grad_norm = std::sqrt(kernels::SquaredNorm(g));
    out.iterations = it;
    if (out.grad_norm < tol) break;
    LossAndGradient(y, pooled, &g);
    x_prev = x;
    x = y;
    kernels::Axpy(-step, g, x);
    const double fnew = LossAndGradient(x, pooled, &g);
    if (fnew > fx) {
      // Restart momentum when the objective goes up.
      t = 1.0;
      y = x;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double mom = (t - 1.0) / t_next;
      y = x;
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += mom * (x[j] - x_prev[j]);
      t = t_next;
    }
    fx = fnew;
  }
  out.theta = x;
  out.loss = LossAndGradient(x, pooled, &g);
  out.grad_norm = std::sqrt(kernels::SquaredNorm(g));
  return out;
}

}  // namespace cre
