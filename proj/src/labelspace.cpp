// src/labelspace.cpp

// Copyright 2026  The soundtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "soundtex/labelspace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "soundtex/error.hpp"
#include "soundtex/parallel.hpp"
#include "soundtex/random.hpp"

namespace soundtex {

namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void RequireFinite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v))
      throw Error(Errc::kNonFiniteInput, "feature contains a non-finite value");
  }
}

struct Nearest {
  std::uint32_t index = 0;
  double squared = 0.0;
};

Nearest FindNearest(const Matrix& centroids, std::span<const double> x) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = SquaredDistance(centroids.row(c), x);
    if (d < best.squared) best = {static_cast<std::uint32_t>(c), d};
  }
  return best;
}

// Greedy k-means++: each new center is the best of a few D^2-weighted
// candidates, measured by the resulting potential.
Matrix SeedPlusPlus(const Matrix& x, int k, std::mt19937_64& rng) {
  const std::size_t n = x.rows();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  Matrix centers(static_cast<std::size_t>(k), x.cols());
  std::size_t pick = UniformIndex(rng, n);
  std::copy(x.row(pick).begin(), x.row(pick).end(), centers.row(0).begin());
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i)
    closest[i] = SquaredDistance(x.row(i), centers.row(0));
  std::vector<double> candidate(n), best_closest(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : closest) total += d;
    if (!(total > 0.0))
      throw Error(Errc::kTooFewSamples,
                  "fewer distinct rows than k = " + std::to_string(k));
    double best_potential = std::numeric_limits<double>::infinity();
    std::size_t best = n;
    for (int t = 0; t < trials; ++t) {
      const double target = Uniform01(rng) * total;
      double running = 0.0;
      std::size_t cand = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (closest[i] <= 0.0) continue;
        cand = i;
        running += closest[i];
        if (running > target) break;
      }
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i] = std::min(closest[i], SquaredDistance(x.row(i), x.row(cand)));
        potential += candidate[i];
      }
      if (potential < best_potential) {
        best_potential = potential;
        best = cand;
        best_closest.swap(candidate);
      }
    }
    std::copy(x.row(best).begin(), x.row(best).end(), centers.row(c).begin());
    closest.swap(best_closest);
  }
  return centers;
}

double AssignAll(const Matrix& x, const Matrix& centers,
                 std::vector<Nearest>& out, int workers) {
  ParallelFor(x.rows(), workers,
              [&](std::size_t i) { out[i] = FindNearest(centers, x.row(i)); });
  double inertia = 0.0;
  for (const auto& a : out) inertia += a.squared;
  return inertia;
}

}  // namespace

ClusterModel FitKMeans(const Matrix& features, int k, std::uint64_t seed,
                       const KMeansOptions& options) {
  Require(k >= 1, "k must be at least 1");
  const std::size_t n = features.rows();
  if (n < static_cast<std::size_t>(k))
    throw Error(Errc::kTooFewSamples, std::to_string(n) + " rows for k = " +
                                          std::to_string(k));
  RequireFinite(features.data());

  std::mt19937_64 rng(seed);
  ClusterModel model;
  model.seed = seed;
  Matrix centers = SeedPlusPlus(features, k, rng);

  std::vector<Nearest> assign(n);
  double inertia = AssignAll(features, centers, assign, options.workers);
  model.inertia_history.push_back(inertia);

  const std::size_t dim = features.cols();
  for (int iter = 0; iter < options.max_iterations && inertia > 0.0; ++iter) {
    Matrix sums(static_cast<std::size_t>(k), dim);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = sums.row(assign[i].index);
      const auto src = features.row(i);
      for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
      ++counts[assign[i].index];
    }
    std::vector<bool> taken(n, false);
    for (int c = 0; c < k; ++c) {
      auto dst = centers.row(static_cast<std::size_t>(c));
      if (counts[c] > 0) {
        const auto src = sums.row(static_cast<std::size_t>(c));
        for (std::size_t d = 0; d < dim; ++d) dst[d] = src[d] / counts[c];
        continue;
      }
      // Empty cluster: move it onto the worst-fit point not already used.
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (far == n || assign[i].squared > assign[far].squared) far = i;
      }
      taken[far] = true;
      std::copy(features.row(far).begin(), features.row(far).end(), dst.begin());
    }

    std::vector<Nearest> next(n);
    const double updated = AssignAll(features, centers, next, options.workers);
    if (updated > inertia * (1.0 + 1e-9) + 1e-300)
      throw std::logic_error("k-means inertia increased during a Lloyd step");
    model.inertia_history.push_back(updated);
    bool changed = false;
    for (std::size_t i = 0; i < n && !changed; ++i)
      changed = next[i].index != assign[i].index;
    const double drop = inertia - updated;
    assign = std::move(next);
    const double previous = inertia;
    inertia = updated;
    if (!changed || drop <= options.relative_tolerance * previous) break;
  }

  model.centroids = std::move(centers);
  model.inertia = inertia;
  return model;
}

LabelAssignment AssignCluster(const ClusterModel& model,
                              std::span<const double> feature) {
  Require(model.k() >= 1, "cluster model has no centroids");
  if (feature.size() != model.dim())
    throw Error(Errc::kDimensionMismatch,
                "feature has " + std::to_string(feature.size()) +
                    " values, model expects " + std::to_string(model.dim()));
  RequireFinite(feature);
  const auto best = FindNearest(model.centroids, feature);
  return {best.index, std::sqrt(best.squared), true};
}

std::vector<LabelAssignment> AssignClusters(const ClusterModel& model,
                                            const Matrix& features,
                                            int workers) {
  std::vector<LabelAssignment> out(features.rows());
  ParallelFor(features.rows(), workers, [&](std::size_t i) {
    out[i] = AssignCluster(model, features.row(i));
  });
  return out;
}

std::vector<bool> PruneOutliers(const ClusterModel& model,
                                const Matrix& features, int workers) {
  const auto labels = AssignClusters(model, features, workers);
  const std::size_t n = labels.size();
  if (n == 0) return {};
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = labels[i].distance;
  std::vector<double> sorted = dist;
  std::sort(sorted.begin(), sorted.end());
  const double threshold = n % 2 == 1
                               ? sorted[n / 2]
                               : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::vector<bool> retained(n);
  for (std::size_t i = 0; i < n; ++i) retained[i] = dist[i] <= threshold;
  return retained;
}

BinaryCodeModel FitPca(const Matrix& features, int n_bits) {
  Require(n_bits >= 1 && n_bits <= 32, "n_bits must be in [1, 32]");
  const std::size_t n = features.rows();
  const std::size_t dim = features.cols();
  if (n < static_cast<std::size_t>(n_bits) + 1)
    throw Error(Errc::kTooFewSamples,
                std::to_string(n) + " rows for " + std::to_string(n_bits) +
                    " principal axes");
  if (dim < static_cast<std::size_t>(n_bits))
    throw Error(Errc::kTooFewDimensions,
                "input dimension " + std::to_string(dim) + " below " +
                    std::to_string(n_bits) + " bits");
  RequireFinite(features.data());

  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> x(features.data().data(),
                                     static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(dim));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");

  BinaryCodeModel model;
  model.mean.assign(mean.data(), mean.data() + dim);
  model.axes = Matrix(static_cast<std::size_t>(n_bits), dim);
  for (int b = 0; b < n_bits; ++b) {
    // Eigen sorts eigenvalues ascending.
    const Eigen::Index col = static_cast<Eigen::Index>(dim) - 1 - b;
    Eigen::VectorXd axis = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    std::copy(axis.data(), axis.data() + dim,
              model.axes.row(static_cast<std::size_t>(b)).begin());
    model.eigenvalues.push_back(solver.eigenvalues()(col));
  }
  return model;
}

BinaryCodeModel FitSpectrumModel(const Matrix& snapshots, int n_bits) {
  auto model = FitPca(snapshots, n_bits);
  model.kind = ModelKind::kSpectrum;
  return model;
}

std::uint32_t EncodeBinary(const BinaryCodeModel& model,
                           std::span<const double> feature) {
  if (feature.size() != model.dim())
    throw Error(Errc::kDimensionMismatch,
                "feature has " + std::to_string(feature.size()) +
                    " values, model expects " + std::to_string(model.dim()));
  RequireFinite(feature);
  std::uint32_t code = 0;
  for (int b = 0; b < model.n_bits(); ++b) {
    const auto axis = model.axes.row(static_cast<std::size_t>(b));
    double proj = 0.0;
    for (std::size_t d = 0; d < feature.size(); ++d)
      proj += axis[d] * (feature[d] - model.mean[d]);
    if (proj >= 0.0) code |= (std::uint32_t{1} << b);
  }
  return code;
}

LabelStatistics ComputeLabelStatistics(std::span<const std::uint32_t> labels,
                                       int k) {
  Require(k >= 1, "k must be at least 1");
  Require(!labels.empty(), "label statistics need at least one label");
  std::map<std::uint32_t, std::size_t> counts;
  for (auto l : labels) {
    Require(l < static_cast<std::uint64_t>(k), "label outside [0, k)");
    ++counts[l];
  }
  std::size_t modal = 0;
  for (const auto& [label, count] : counts) modal = std::max(modal, count);
  return {1.0 / k, static_cast<double>(modal) / labels.size()};
}

int HammingDistance(std::uint32_t a, std::uint32_t b) {
  return std::popcount(a ^ b);
}

}  // namespace soundtex
