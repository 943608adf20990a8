// include/soundtex/texture.hpp

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

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "soundtex/audio.hpp"
#include "soundtex/cochlear.hpp"
#include "soundtex/matrix.hpp"

namespace soundtex {

inline constexpr int kNumModulationFilters = 10;
inline constexpr double kModulationLowHz = 0.5;
inline constexpr double kModulationHighHz = 200.0;
inline constexpr double kModulationQ = 2.0;

/// Channel offsets whose pairwise envelope correlations enter the texture.
inline constexpr std::array<int, 4> kCorrelationOffsets = {1, 2, 3, 5};
inline constexpr int kNumCorrelations = 31 + 30 + 29 + 27;

inline constexpr int kMarginalDim = 2 * kNumCochlearChannels;
inline constexpr int kModulationDim =
    kNumCochlearChannels * kNumModulationFilters;
inline constexpr int kLoudnessDim = 1;
inline constexpr int kTextureDim =
    kMarginalDim + kNumCorrelations + kModulationDim + kLoudnessDim;
static_assert(kTextureDim == 502);

/// Guard below which means, deviations and loudness count as zero.
inline constexpr double kStatEpsilon = 1e-8;

/// Weight applied to a feature group of the given dimensionality before it
/// enters the flat vector. Change this one function to switch the group
/// rescaling rule (e.g. to 1/sqrt(dim)).
constexpr double GroupWeight(int group_dim) { return 1.0 / group_dim; }

/// Duration of the spectrum snapshot interval, one frame of 30 Hz video.
inline constexpr double kSnapshotSeconds = 0.0333;

/// Ten constant-Q band-pass filters on the 400 Hz envelope axis, centers
/// log-spaced from 0.5 to 200 Hz. Each response is a half-cosine in
/// log2-frequency with half-power points at center * 2^(+-w/2), where w is
/// chosen so the half-power bandwidth is center / Q.
class ModulationFilterbank {
 public:
  ModulationFilterbank();

  int num_filters() const { return kNumModulationFilters; }
  std::span<const double> center_frequencies() const { return centers_; }
  /// Full support width of each filter, in octaves.
  double width_octaves() const { return width_octaves_; }

  double Response(int filter, double hz) const;

  /// Gains on the n/2 + 1 bins of an n-point real FFT at `rate`.
  std::vector<std::vector<double>> SampledResponses(std::size_t n,
                                                    double rate) const;

 private:
  std::vector<double> centers_;
  double width_octaves_;
};

ModulationFilterbank BuildModulationFilterbank();

struct MarginalStats {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> sigma_tilde;
};

struct ModulationPower {
  Matrix b;        // channels x filters
  Matrix b_tilde;  // channels x filters
};

struct GainNormalized {
  SubbandEnvelopes env;
  double loudness = 0.0;
};

/// Grouped texture statistics plus the rescaled flat vector
/// [mu, sigma_tilde, rho, b_tilde, loudness].
struct SoundTexture {
  std::vector<double> mu;           // 32
  std::vector<double> sigma_tilde;  // 32
  std::vector<double> rho;          // 117
  Matrix b_tilde;                   // 32 x 10
  double loudness = 0.0;
  std::vector<double> flat;  // 502
};

/// Median over time steps of the 32-channel envelope norm.
double Loudness(const SubbandEnvelopes& env);

GainNormalized GainNormalize(const SubbandEnvelopes& env);

MarginalStats ComputeMarginalStats(const SubbandEnvelopes& env);

/// (j, k) pairs in output order: offsets ascending, then j ascending.
std::vector<std::pair<int, int>> CorrelationPairs(int channels);

std::vector<double> BandCorrelations(const SubbandEnvelopes& env);

ModulationPower ComputeModulationPower(const SubbandEnvelopes& env,
                                       const ModulationFilterbank& mb,
                                       std::span<const double> sigma);

SoundTexture AssembleTexture(const SubbandEnvelopes& env);

/// Cochleagram + texture for one canonical-rate analysis window.
SoundTexture TextureFromWindow(const Waveform& window);

/// Per-channel mean of the loudness-normalized cochleagram over the 33.3 ms
/// interval centered on `center_time`, taken from a `window_duration` window
/// around it. `w` is resampled to 16 kHz if needed.
std::vector<double> SpectrumSnapshot(
    const Waveform& w, double center_time,
    double window_duration = kDefaultWindowSeconds);

}  // namespace soundtex
