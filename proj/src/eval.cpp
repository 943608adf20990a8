// src/eval.cpp

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

#include "soundtex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "soundtex/error.hpp"
#include "soundtex/labelspace.hpp"
#include "soundtex/parallel.hpp"
#include "soundtex/random.hpp"
#include "soundtex/texture.hpp"

namespace soundtex {

namespace {

constexpr double kPeak = 0.9;

void RequireFrequency(double hz, double rate, const char* what) {
  Require(hz > 0.0 && hz < std::min(8000.0, rate / 2.0), what);
}

std::vector<int> MajorityFamilyPerCluster(std::span<const std::uint32_t> clusters,
                                          std::span<const int> families, int k) {
  std::vector<std::map<int, std::size_t>> counts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < clusters.size(); ++i)
    ++counts[clusters[i]][families[i]];
  std::vector<int> majority(static_cast<std::size_t>(k), -1);
  for (int c = 0; c < k; ++c) {
    std::size_t best = 0;
    for (const auto& [family, count] : counts[c]) {
      if (count > best) {
        best = count;
        majority[c] = family;
      }
    }
  }
  return majority;
}

std::vector<std::uint32_t> Labels(const std::vector<LabelAssignment>& a) {
  std::vector<std::uint32_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].label;
  return out;
}

}  // namespace

std::string FamilyName(SoundFamily family) {
  switch (family) {
    case SoundFamily::kPureTone: return "pure_tone";
    case SoundFamily::kWhiteNoise: return "white_noise";
    case SoundFamily::kAmNoise: return "am_noise";
    case SoundFamily::kHarmonicStack: return "harmonic_stack";
  }
  return "unknown";
}

SoundFamily ParseFamily(const std::string& name) {
  for (auto f : {SoundFamily::kPureTone, SoundFamily::kWhiteNoise,
                 SoundFamily::kAmNoise, SoundFamily::kHarmonicStack}) {
    if (FamilyName(f) == name) return f;
  }
  throw Error(Errc::kInvalidArgument, "unknown sound family " + name);
}

Waveform Generate(const SyntheticSpec& spec) {
  Require(spec.duration > 0.0, "synthetic duration must be positive");
  Require(spec.sample_rate > 0, "synthetic sample rate must be positive");
  const double rate = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * rate));
  Require(n >= 1, "synthetic clip shorter than one sample");

  std::mt19937_64 rng(spec.seed);
  const double two_pi = 2.0 * std::numbers::pi;
  Waveform w;
  w.sample_rate = spec.sample_rate;
  w.samples.resize(n);
  switch (spec.family) {
    case SoundFamily::kPureTone: {
      RequireFrequency(spec.tone_hz, rate, "tone frequency out of range");
      const double phase = two_pi * Uniform01(rng);
      for (std::size_t i = 0; i < n; ++i)
        w.samples[i] = std::sin(two_pi * spec.tone_hz * i / rate + phase);
      break;
    }
    case SoundFamily::kWhiteNoise:
      for (auto& s : w.samples) s = StandardNormal(rng);
      break;
    case SoundFamily::kAmNoise: {
      RequireFrequency(spec.am_rate_hz, rate, "AM rate out of range");
      Require(spec.am_depth >= 0.0 && spec.am_depth <= 1.0,
              "AM depth must be in [0, 1]");
      const double phase = two_pi * Uniform01(rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double gain =
            1.0 + spec.am_depth * std::cos(two_pi * spec.am_rate_hz * i / rate + phase);
        w.samples[i] = gain * StandardNormal(rng);
      }
      break;
    }
    case SoundFamily::kHarmonicStack: {
      Require(spec.partials >= 1, "harmonic stack needs at least one partial");
      RequireFrequency(spec.fundamental_hz * spec.partials, rate,
                       "highest partial out of range");
      std::vector<double> phases(static_cast<std::size_t>(spec.partials));
      for (auto& p : phases) p = two_pi * Uniform01(rng);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int p = 0; p < spec.partials; ++p)
          acc += std::sin(two_pi * spec.fundamental_hz * (p + 1) * i / rate + phases[p]);
        w.samples[i] = acc;
      }
      break;
    }
  }
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (auto& s : w.samples) s *= kPeak / peak;
  }
  return w;
}

std::vector<LabeledClip> MakeFamilyCorpus(std::span<const SoundFamily> families,
                                          int per_family, std::uint64_t seed) {
  Require(per_family >= 1, "need at least one clip per family");
  std::mt19937_64 rng(seed);
  std::vector<LabeledClip> clips;
  clips.reserve(families.size() * static_cast<std::size_t>(per_family));
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (int i = 0; i < per_family; ++i) {
      SyntheticSpec spec;
      spec.family = families[f];
      spec.seed = rng();
      // Log-uniform tone and fundamental placement across the speech band.
      spec.tone_hz = 300.0 * std::pow(10.0, Uniform01(rng));
      spec.fundamental_hz = 100.0 * std::pow(3.0, Uniform01(rng));
      spec.partials = 10;
      spec.am_depth = 0.8 + 0.2 * Uniform01(rng);
      clips.push_back({Generate(spec), static_cast<int>(f)});
    }
  }
  return clips;
}

Matrix ExtractTextures(std::span<const LabeledClip> clips, int workers) {
  Matrix out(clips.size(), kTextureDim);
  ParallelFor(clips.size(), workers, [&](std::size_t i) {
    const auto& audio = clips[i].audio;
    const Waveform canonical = ResampleWaveform(audio, kCanonicalRate);
    const auto tex = TextureFromWindow(canonical);
    std::copy(tex.flat.begin(), tex.flat.end(), out.row(i).begin());
  });
  return out;
}

double ClusterPurity(std::span<const std::uint32_t> clusters,
                     std::span<const int> families) {
  Require(clusters.size() == families.size() && !clusters.empty(),
          "purity needs one family per clustered item");
  std::map<std::uint32_t, std::map<int, std::size_t>> counts;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    ++counts[clusters[i]][families[i]];
  std::size_t total = 0;
  for (const auto& [cluster, by_family] : counts) {
    std::size_t best = 0;
    for (const auto& [family, count] : by_family) best = std::max(best, count);
    total += best;
  }
  return static_cast<double>(total) / clusters.size();
}

double FamilySeparation(const Matrix& textures, std::span<const int> families,
                        int k, std::uint64_t seed, int workers) {
  Require(textures.rows() == families.size(), "one family label per texture");
  KMeansOptions opts;
  opts.workers = workers;
  const auto model = FitKMeans(textures, k, seed, opts);
  const auto labels = Labels(AssignClusters(model, textures, workers));
  return ClusterPurity(labels, families);
}

double NearestCentroidAccuracy(const Matrix& train, std::span<const int> train_families,
                               const Matrix& test, std::span<const int> test_families,
                               int k, std::uint64_t seed, int workers) {
  Require(train.rows() == train_families.size(), "one family label per train row");
  Require(test.rows() == test_families.size() && test.rows() > 0,
          "one family label per test row");
  KMeansOptions opts;
  opts.workers = workers;
  const auto model = FitKMeans(train, k, seed, opts);
  const auto majority = MajorityFamilyPerCluster(
      Labels(AssignClusters(model, train, workers)), train_families, k);
  const auto test_labels = AssignClusters(model, test, workers);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test_labels.size(); ++i)
    correct += majority[test_labels[i].label] == test_families[i] ? 1 : 0;
  return static_cast<double>(correct) / test.rows();
}

}  // namespace soundtex
