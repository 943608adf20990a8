// include/soundtex/eval.hpp

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
#include <string>
#include <vector>

#include "soundtex/audio.hpp"
#include "soundtex/matrix.hpp"

namespace soundtex {

enum class SoundFamily { kPureTone, kWhiteNoise, kAmNoise, kHarmonicStack };

std::string FamilyName(SoundFamily family);
SoundFamily ParseFamily(const std::string& name);

/// Parameters of a synthetic clip. Only the fields of the chosen family are
/// used.
struct SyntheticSpec {
  SoundFamily family = SoundFamily::kPureTone;
  double tone_hz = 1000.0;
  double am_rate_hz = 4.0;
  double am_depth = 0.9;
  double fundamental_hz = 200.0;
  int partials = 10;
  double duration = kDefaultWindowSeconds;
  std::uint64_t seed = 0;
  int sample_rate = kCanonicalRate;
};

/// Deterministic for a fixed spec; peak |sample| is 0.9.
Waveform Generate(const SyntheticSpec& spec);

struct LabeledClip {
  Waveform audio;
  int family = 0;  // index into the family list the corpus was built from
};

/// `per_family` clips of each family with per-clip parameters drawn from
/// `seed` (tone frequency, AM phase, noise seeds, ...).
std::vector<LabeledClip> MakeFamilyCorpus(std::span<const SoundFamily> families,
                                          int per_family, std::uint64_t seed);

/// One 502-d texture row per clip, computed in parallel, order preserved.
Matrix ExtractTextures(std::span<const LabeledClip> clips, int workers = 1);

/// (1/n) * sum over clusters of the largest family count in that cluster.
double ClusterPurity(std::span<const std::uint32_t> clusters,
                     std::span<const int> families);

/// Fits k-means on the textures and reports cluster purity against the
/// generating families.
double FamilySeparation(const Matrix& textures, std::span<const int> families,
                        int k, std::uint64_t seed = 0, int workers = 1);

/// Fits k-means on the training textures, names each cluster by the
/// majority family of its training members, and scores test clips by
/// whether their nearest centroid carries their family.
double NearestCentroidAccuracy(const Matrix& train, std::span<const int> train_families,
                               const Matrix& test, std::span<const int> test_families,
                               int k, std::uint64_t seed = 0, int workers = 1);

}  // namespace soundtex
