// include/soundtex/cochlear.hpp

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

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "soundtex/audio.hpp"
#include "soundtex/matrix.hpp"

namespace soundtex {

inline constexpr int kNumCochlearChannels = 32;
inline constexpr int kEnvelopeRate = 400;
inline constexpr double kCompressionExponent = 0.3;
inline constexpr double kCochlearLowHz = 20.0;
inline constexpr double kCochlearHighHz = 10000.0;

/// ERB-number scale (Glasberg & Moore 1990): 21.4 log10(1 + 0.00437 f).
double HzToErb(double hz);
double ErbToHz(double erb);

/// 32 half-cosine band-pass filters on an ERB-rate axis.
///
/// The band [low, high] is split into 32 equal ERB segments and channel i is
/// centered on segment i. Each response is cos(pi/2 * x) with x the ERB
/// distance from the center in units of the segment width, so neighbouring
/// channels cross at half power and the squared responses sum to one
/// between centers. Below the first and above the last center the edge
/// channels stay at unit gain out to the band limits and then taper over
/// half a segment; the squared sum is therefore flat on the whole band.
///
/// Immutable after construction; the per-FFT-size response tables are
/// cached behind a mutex so one instance can be shared across threads.
class CochlearFilterbank {
 public:
  explicit CochlearFilterbank(int audio_rate);

  int audio_rate() const { return audio_rate_; }
  int num_channels() const { return kNumCochlearChannels; }
  double low_hz() const { return low_hz_; }
  double high_hz() const { return high_hz_; }
  std::span<const double> center_frequencies() const { return centers_hz_; }

  /// Gain of `channel` at frequency `hz` (>= 0).
  double Response(int channel, double hz) const;

  /// Channel gains on the n/2 + 1 bins of an n-point real FFT, one vector
  /// per channel.
  std::shared_ptr<const std::vector<std::vector<double>>> SampledResponses(
      std::size_t n) const;

 private:
  int audio_rate_;
  double low_hz_;
  double high_hz_;
  double low_erb_;
  double high_erb_;
  double spacing_erb_;
  std::vector<double> centers_erb_;
  std::vector<double> centers_hz_;

  struct Cache {
    std::mutex mu;
    std::map<std::size_t,
             std::shared_ptr<const std::vector<std::vector<double>>>>
        by_size;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Requires audio_rate >= 8000.
CochlearFilterbank BuildCochlearFilterbank(int audio_rate);

/// Shared filterbank at the canonical 16 kHz rate.
const CochlearFilterbank& CanonicalFilterbank();

/// T x 32 compressed envelopes sampled at 400 Hz.
struct SubbandEnvelopes {
  Matrix envelopes;
  int envelope_rate = kEnvelopeRate;

  std::size_t frames() const { return envelopes.rows(); }
  std::size_t channels() const { return envelopes.cols(); }
};

/// Hilbert envelope |analytic(s * f_channel)| at the waveform's rate.
std::vector<double> SubbandEnvelope(const Waveform& w,
                                    const CochlearFilterbank& fb, int channel);

/// All 32 uncompressed envelopes at the waveform's rate, sharing one forward
/// transform. Result is samples x 32.
Matrix SubbandEnvelopeMatrix(const Waveform& w, const CochlearFilterbank& fb);

/// envelope^0.3 resampled to 400 Hz, clamped at zero.
std::vector<double> CompressAndDownsample(std::span<const double> envelope,
                                          int in_rate);

SubbandEnvelopes Cochleagram(const Waveform& w, const CochlearFilterbank& fb);
SubbandEnvelopes Cochleagram(const Waveform& w);

}  // namespace soundtex
