// include/soundtex/labelspace.hpp

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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soundtex/matrix.hpp"

namespace soundtex {

inline constexpr int kDefaultClusters = 30;
inline constexpr int kDefaultBits = 30;

enum class ModelKind : std::uint8_t { kCluster = 1, kBinary = 2, kSpectrum = 3 };

struct ClusterModel {
  Matrix centroids;  // k x dim
  std::uint64_t seed = 0;
  double inertia = 0.0;
  /// Inertia after each assignment pass, first entry from the seeding.
  std::vector<double> inertia_history;

  int k() const { return static_cast<int>(centroids.rows()); }
  std::size_t dim() const { return centroids.cols(); }
};

/// Mean plus the leading principal axes (orthonormal rows). Also used for
/// the spectrum label space, where the inputs are 32-d snapshots.
struct BinaryCodeModel {
  ModelKind kind = ModelKind::kBinary;
  std::vector<double> mean;
  Matrix axes;                      // n_bits x dim
  std::vector<double> eigenvalues;  // descending, one per axis

  int n_bits() const { return static_cast<int>(axes.rows()); }
  std::size_t dim() const { return mean.size(); }
};

struct LabelAssignment {
  std::uint32_t label = 0;
  double distance = 0.0;
  bool retained = true;
};

struct KMeansOptions {
  int max_iterations = 300;
  double relative_tolerance = 1e-6;
  int workers = 1;
};

/// k-means++ seeding from `seed`, then Lloyd iterations. Empty clusters are
/// moved to the point farthest from its centroid. Output depends only on
/// (features, k, seed), never on the worker count.
ClusterModel FitKMeans(const Matrix& features, int k, std::uint64_t seed,
                       const KMeansOptions& options = {});

/// Nearest centroid by Euclidean distance; ties go to the lowest index.
LabelAssignment AssignCluster(const ClusterModel& model,
                              std::span<const double> feature);

std::vector<LabelAssignment> AssignClusters(const ClusterModel& model,
                                            const Matrix& features,
                                            int workers = 1);

/// retained[i] is true when row i is no farther from its centroid than the
/// median such distance over the whole dataset.
std::vector<bool> PruneOutliers(const ClusterModel& model,
                                const Matrix& features, int workers = 1);

/// Leading `n_bits` eigenvectors of the sample covariance, each signed so
/// its largest-magnitude coordinate is positive.
BinaryCodeModel FitPca(const Matrix& features, int n_bits = kDefaultBits);

/// FitPca over 32-d spectrum snapshots, tagged as a spectrum model.
BinaryCodeModel FitSpectrumModel(const Matrix& snapshots,
                                 int n_bits = kDefaultBits);

/// Bit i is set iff the projection on axis i of (feature - mean) is >= 0.
std::uint32_t EncodeBinary(const BinaryCodeModel& model,
                           std::span<const double> feature);

struct LabelStatistics {
  double chance = 0.0;    // 1 / k
  double majority = 0.0;  // share of the most common label
};

LabelStatistics ComputeLabelStatistics(std::span<const std::uint32_t> labels,
                                       int k);

int HammingDistance(std::uint32_t a, std::uint32_t b);

}  // namespace soundtex
