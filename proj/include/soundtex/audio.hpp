// include/soundtex/audio.hpp

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
#include <filesystem>
#include <span>
#include <vector>

namespace soundtex {

/// Canonical analysis rate. Everything downstream of ingest runs at 16 kHz mono.
inline constexpr int kCanonicalRate = 16000;

/// Default analysis window length, in seconds.
inline constexpr double kDefaultWindowSeconds = 3.75;

/// Decoded mono PCM. Samples are finite; decoded audio lies in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws InvalidArgument if the waveform breaks its invariants
/// (non-positive rate, no samples, non-finite values).
void ValidateWaveform(const Waveform& w);

struct WindowSpec {
  double center_time = 0.0;
  double duration = kDefaultWindowSeconds;
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a RIFF/WAVE file: PCM 8/16/24/32-bit integer or 32-bit IEEE float,
/// mono or stereo. Stereo is averaged down to mono.
Waveform DecodeAudio(const std::filesystem::path& path);

/// Same as DecodeAudio, from an in-memory file image.
Waveform DecodeWavBytes(std::span<const std::uint8_t> bytes);

/// Writes a mono WAV file. Samples outside [-1, 1] are clipped for kPcm16.
void WriteWav(const std::filesystem::path& path, const Waveform& w,
              WavEncoding encoding = WavEncoding::kFloat32);

std::vector<std::uint8_t> EncodeWavBytes(const Waveform& w,
                                         WavEncoding encoding);

/// Band-limited rational resampling to `target_rate`.
Waveform ResampleWaveform(const Waveform& w, int target_rate);

/// Cuts round(duration * rate) samples centered on spec.center_time.
/// Parts of the window outside the recording are zero.
/// Throws WindowFullyOutside when the window misses the recording entirely.
Waveform ExtractWindow(const Waveform& w, const WindowSpec& spec);

}  // namespace soundtex
