// src/cochlear.cpp

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

#include "soundtex/cochlear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "soundtex/error.hpp"
#include "soundtex/fft.hpp"
#include "soundtex/resample.hpp"

namespace soundtex {

namespace {

const RationalResampler& EnvelopeResampler(int in_rate) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RationalResampler>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[in_rate];
  if (!slot) slot = std::make_unique<RationalResampler>(in_rate, kEnvelopeRate);
  return *slot;
}

// Analytic-signal envelope of one channel given the input spectrum.
std::vector<double> EnvelopeFromSpectrum(std::span<const fft::Complex> spectrum,
                                         std::span<const double> gains,
                                         std::size_t n) {
  std::vector<fft::Complex> analytic(n, fft::Complex(0.0, 0.0));
  const std::size_t half = n / 2;
  analytic[0] = spectrum[0] * gains[0];
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double g = gains[k];
    if (g == 0.0) continue;
    // Nyquist bin of an even-length transform is its own mirror.
    const double scale = (n % 2 == 0 && k == half) ? 1.0 : 2.0;
    analytic[k] = spectrum[k] * (g * scale);
  }
  const auto signal = fft::ComplexInverse(analytic);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(signal[i]);
  return env;
}

}  // namespace

double HzToErb(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double ErbToHz(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437;
}

CochlearFilterbank::CochlearFilterbank(int audio_rate)
    : audio_rate_(audio_rate) {
  Require(audio_rate >= 8000, "cochlear filterbank needs audio_rate >= 8000");
  low_hz_ = kCochlearLowHz;
  high_hz_ = std::min(kCochlearHighHz, audio_rate / 2.0 * 0.95);
  low_erb_ = HzToErb(low_hz_);
  high_erb_ = HzToErb(high_hz_);
  spacing_erb_ = (high_erb_ - low_erb_) / kNumCochlearChannels;
  centers_erb_.resize(kNumCochlearChannels);
  centers_hz_.resize(kNumCochlearChannels);
  for (int i = 0; i < kNumCochlearChannels; ++i) {
    centers_erb_[i] = low_erb_ + (i + 0.5) * spacing_erb_;
    centers_hz_[i] = ErbToHz(centers_erb_[i]);
  }
}

double CochlearFilterbank::Response(int channel, double hz) const {
  if (channel < 0 || channel >= kNumCochlearChannels)
    throw Error(Errc::kChannelOutOfRange,
                "channel " + std::to_string(channel) + " not in [0, 32)");
  if (hz <= 0.0 || hz >= audio_rate_ / 2.0) return 0.0;
  const double e = HzToErb(hz);
  const double x = (e - centers_erb_[channel]) / spacing_erb_;
  const double taper = spacing_erb_ / 2.0;
  if (channel == 0 && x < 0.0) {
    if (e >= low_erb_) return 1.0;
    const double d = (low_erb_ - e) / taper;
    return d < 1.0 ? std::cos(std::numbers::pi / 2.0 * d) : 0.0;
  }
  if (channel == kNumCochlearChannels - 1 && x > 0.0) {
    if (e <= high_erb_) return 1.0;
    const double d = (e - high_erb_) / taper;
    return d < 1.0 ? std::cos(std::numbers::pi / 2.0 * d) : 0.0;
  }
  if (std::abs(x) >= 1.0) return 0.0;
  return std::cos(std::numbers::pi / 2.0 * x);
}

std::shared_ptr<const std::vector<std::vector<double>>>
CochlearFilterbank::SampledResponses(std::size_t n) const {
  std::lock_guard lock(cache_->mu);
  auto& slot = cache_->by_size[n];
  if (!slot) {
    auto table = std::make_shared<std::vector<std::vector<double>>>(
        kNumCochlearChannels, std::vector<double>(n / 2 + 1, 0.0));
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const double hz = fft::BinFrequency(k, n, audio_rate_);
      for (int c = 0; c < kNumCochlearChannels; ++c)
        (*table)[c][k] = Response(c, hz);
    }
    slot = std::move(table);
  }
  return slot;
}

CochlearFilterbank BuildCochlearFilterbank(int audio_rate) {
  return CochlearFilterbank(audio_rate);
}

const CochlearFilterbank& CanonicalFilterbank() {
  static const CochlearFilterbank fb(kCanonicalRate);
  return fb;
}

std::vector<double> SubbandEnvelope(const Waveform& w,
                                    const CochlearFilterbank& fb,
                                    int channel) {
  if (channel < 0 || channel >= fb.num_channels())
    throw Error(Errc::kChannelOutOfRange,
                "channel " + std::to_string(channel) + " not in [0, 32)");
  ValidateWaveform(w);
  Require(w.sample_rate == fb.audio_rate(),
          "waveform rate differs from filterbank rate");
  const std::size_t n = w.samples.size();
  const auto spectrum = fft::RealForward(w.samples);
  const auto table = fb.SampledResponses(n);
  return EnvelopeFromSpectrum(spectrum, (*table)[channel], n);
}

Matrix SubbandEnvelopeMatrix(const Waveform& w, const CochlearFilterbank& fb) {
  ValidateWaveform(w);
  Require(w.sample_rate == fb.audio_rate(),
          "waveform rate differs from filterbank rate");
  const std::size_t n = w.samples.size();
  const auto spectrum = fft::RealForward(w.samples);
  const auto table = fb.SampledResponses(n);
  Matrix out(n, kNumCochlearChannels);
  for (int c = 0; c < kNumCochlearChannels; ++c) {
    const auto env = EnvelopeFromSpectrum(spectrum, (*table)[c], n);
    for (std::size_t t = 0; t < n; ++t) out(t, c) = env[t];
  }
  return out;
}

std::vector<double> CompressAndDownsample(std::span<const double> envelope,
                                          int in_rate) {
  Require(in_rate >= kEnvelopeRate, "envelope rate must be >= 400 Hz");
  std::vector<double> compressed(envelope.size());
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    Require(envelope[i] >= 0.0, "envelope must be non-negative");
    compressed[i] = std::pow(envelope[i], kCompressionExponent);
  }
  auto out = EnvelopeResampler(in_rate).Process(compressed);
  for (auto& v : out) v = std::max(v, 0.0);
  return out;
}

SubbandEnvelopes Cochleagram(const Waveform& w, const CochlearFilterbank& fb) {
  ValidateWaveform(w);
  Require(w.sample_rate == fb.audio_rate(),
          "waveform rate differs from filterbank rate");
  const std::size_t n = w.samples.size();
  const auto spectrum = fft::RealForward(w.samples);
  const auto table = fb.SampledResponses(n);
  const std::size_t frames = EnvelopeResampler(w.sample_rate).OutputLength(n);
  SubbandEnvelopes out;
  out.envelopes = Matrix(frames, kNumCochlearChannels);
  for (int c = 0; c < kNumCochlearChannels; ++c) {
    const auto env = EnvelopeFromSpectrum(spectrum, (*table)[c], n);
    const auto low = CompressAndDownsample(env, w.sample_rate);
    for (std::size_t t = 0; t < frames; ++t) out.envelopes(t, c) = low[t];
  }
  return out;
}

SubbandEnvelopes Cochleagram(const Waveform& w) {
  Require(w.sample_rate == kCanonicalRate,
          "cochleagram expects the canonical 16 kHz rate");
  return Cochleagram(w, CanonicalFilterbank());
}

}  // namespace soundtex
