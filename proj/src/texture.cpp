// src/texture.cpp

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

#include "soundtex/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soundtex/error.hpp"
#include "soundtex/fft.hpp"

namespace soundtex {

namespace {

double Median(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

void RequireNonEmpty(const SubbandEnvelopes& env) {
  Require(env.frames() > 0 && env.channels() > 0, "envelopes are empty");
}

}  // namespace

ModulationFilterbank::ModulationFilterbank()
    : centers_(kNumModulationFilters),
      width_octaves_(2.0 * std::asinh(1.0 / (2.0 * kModulationQ)) /
                     std::numbers::ln2) {
  const double ratio = kModulationHighHz / kModulationLowHz;
  for (int i = 0; i < kNumModulationFilters; ++i) {
    centers_[i] = kModulationLowHz *
                  std::pow(ratio, static_cast<double>(i) /
                                      (kNumModulationFilters - 1));
  }
  centers_.back() = kModulationHighHz;
}

double ModulationFilterbank::Response(int filter, double hz) const {
  Require(filter >= 0 && filter < kNumModulationFilters,
          "modulation filter index out of range");
  if (hz <= 0.0) return 0.0;
  const double x = std::log2(hz / centers_[filter]) / width_octaves_;
  if (std::abs(x) >= 1.0) return 0.0;
  return std::cos(std::numbers::pi / 2.0 * x);
}

std::vector<std::vector<double>> ModulationFilterbank::SampledResponses(
    std::size_t n, double rate) const {
  std::vector<std::vector<double>> out(kNumModulationFilters,
                                       std::vector<double>(n / 2 + 1, 0.0));
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double hz = fft::BinFrequency(k, n, rate);
    for (int j = 0; j < kNumModulationFilters; ++j) out[j][k] = Response(j, hz);
  }
  return out;
}

ModulationFilterbank BuildModulationFilterbank() {
  return ModulationFilterbank();
}

double Loudness(const SubbandEnvelopes& env) {
  RequireNonEmpty(env);
  std::vector<double> norms(env.frames());
  for (std::size_t t = 0; t < env.frames(); ++t) {
    double ss = 0.0;
    for (double v : env.envelopes.row(t)) ss += v * v;
    norms[t] = std::sqrt(ss);
  }
  return Median(std::move(norms));
}

GainNormalized GainNormalize(const SubbandEnvelopes& env) {
  GainNormalized out{env, Loudness(env)};
  if (out.loudness > kStatEpsilon) {
    for (auto& v : out.env.envelopes.data()) v /= out.loudness;
  } else {
    out.loudness = 0.0;
  }
  return out;
}

MarginalStats ComputeMarginalStats(const SubbandEnvelopes& env) {
  RequireNonEmpty(env);
  const std::size_t frames = env.frames();
  const std::size_t channels = env.channels();
  MarginalStats out{std::vector<double>(channels),
                    std::vector<double>(channels),
                    std::vector<double>(channels)};
  for (std::size_t c = 0; c < channels; ++c) {
    double sum = 0.0;
    for (std::size_t t = 0; t < frames; ++t) sum += env.envelopes(t, c);
    const double mean = sum / frames;
    double ss = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      const double d = env.envelopes(t, c) - mean;
      ss += d * d;
    }
    out.mu[c] = mean;
    out.sigma[c] = std::sqrt(ss / frames);
    out.sigma_tilde[c] = mean > kStatEpsilon ? out.sigma[c] / mean : 0.0;
  }
  return out;
}

std::vector<std::pair<int, int>> CorrelationPairs(int channels) {
  std::vector<std::pair<int, int>> pairs;
  for (int offset : kCorrelationOffsets) {
    for (int j = 0; j + offset < channels; ++j) pairs.emplace_back(j, j + offset);
  }
  return pairs;
}

std::vector<double> BandCorrelations(const SubbandEnvelopes& env) {
  Require(env.frames() >= 2, "correlations need at least two frames");
  const std::size_t frames = env.frames();
  const int channels = static_cast<int>(env.channels());

  // Centered columns and their sums of squares.
  Matrix centered(channels, frames);
  std::vector<double> ss(channels, 0.0);
  for (int c = 0; c < channels; ++c) {
    double sum = 0.0;
    for (std::size_t t = 0; t < frames; ++t) sum += env.envelopes(t, c);
    const double mean = sum / frames;
    auto row = centered.row(c);
    for (std::size_t t = 0; t < frames; ++t) {
      row[t] = env.envelopes(t, c) - mean;
      ss[c] += row[t] * row[t];
    }
  }

  const double floor = kStatEpsilon * kStatEpsilon * frames;
  std::vector<double> rho;
  rho.reserve(kNumCorrelations);
  for (const auto& [j, k] : CorrelationPairs(channels)) {
    if (ss[j] <= floor || ss[k] <= floor) {
      rho.push_back(0.0);
      continue;
    }
    const auto a = centered.row(j);
    const auto b = centered.row(k);
    double cross = 0.0;
    for (std::size_t t = 0; t < frames; ++t) cross += a[t] * b[t];
    rho.push_back(std::clamp(cross / std::sqrt(ss[j] * ss[k]), -1.0, 1.0));
  }
  return rho;
}

ModulationPower ComputeModulationPower(const SubbandEnvelopes& env,
                                       const ModulationFilterbank& mb,
                                       std::span<const double> sigma) {
  RequireNonEmpty(env);
  Require(sigma.size() == env.channels(), "sigma length must match channels");
  const std::size_t n = env.frames();
  const std::size_t channels = env.channels();
  const auto gains = mb.SampledResponses(n, env.envelope_rate);
  ModulationPower out{Matrix(channels, kNumModulationFilters),
                      Matrix(channels, kNumModulationFilters)};
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (std::size_t c = 0; c < channels; ++c) {
    auto column = env.envelopes.column(c);
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / n;
    for (auto& v : column) v -= mean;
    const auto spectrum = fft::RealForward(column);
    std::vector<double> power(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
      // Each interior bin stands for itself and its negative-frequency mirror.
      const bool self_mirror = k == 0 || (n % 2 == 0 && k == n / 2);
      power[k] = std::norm(spectrum[k]) * (self_mirror ? 1.0 : 2.0);
    }
    for (int j = 0; j < kNumModulationFilters; ++j) {
      // Parseval: mean squared filter output from the filtered spectrum.
      double acc = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) {
        const double g = gains[j][k];
        acc += g * g * power[k];
      }
      const double b = acc * norm;
      out.b(c, j) = b;
      out.b_tilde(c, j) = sigma[c] > kStatEpsilon ? std::sqrt(b) / sigma[c] : 0.0;
    }
  }
  return out;
}

SoundTexture AssembleTexture(const SubbandEnvelopes& env) {
  RequireNonEmpty(env);
  Require(env.channels() == kNumCochlearChannels,
          "texture expects 32 cochlear channels");
  static const ModulationFilterbank mod_bank;

  const auto normalized = GainNormalize(env);
  auto marginals = ComputeMarginalStats(normalized.env);
  auto rho = BandCorrelations(normalized.env);
  auto modulation =
      ComputeModulationPower(normalized.env, mod_bank, marginals.sigma);

  SoundTexture tex;
  tex.mu = std::move(marginals.mu);
  tex.sigma_tilde = std::move(marginals.sigma_tilde);
  tex.rho = std::move(rho);
  tex.b_tilde = std::move(modulation.b_tilde);
  tex.loudness = normalized.loudness;

  tex.flat.reserve(kTextureDim);
  const double w_marginal = GroupWeight(kMarginalDim);
  const double w_corr = GroupWeight(kNumCorrelations);
  const double w_mod = GroupWeight(kModulationDim);
  const double w_loud = GroupWeight(kLoudnessDim);
  for (double v : tex.mu) tex.flat.push_back(v * w_marginal);
  for (double v : tex.sigma_tilde) tex.flat.push_back(v * w_marginal);
  for (double v : tex.rho) tex.flat.push_back(v * w_corr);
  for (double v : tex.b_tilde.data()) tex.flat.push_back(v * w_mod);
  tex.flat.push_back(tex.loudness * w_loud);
  if (tex.flat.size() != static_cast<std::size_t>(kTextureDim))
    throw std::logic_error("texture vector is not 502-dimensional");
  return tex;
}

SoundTexture TextureFromWindow(const Waveform& window) {
  return AssembleTexture(Cochleagram(window));
}

std::vector<double> SpectrumSnapshot(const Waveform& w, double center_time,
                                     double window_duration) {
  ValidateWaveform(w);
  const double half = kSnapshotSeconds / 2.0;
  if (center_time + half < 0.0 || center_time - half > w.duration())
    throw Error(Errc::kWindowFullyOutside,
                "snapshot interval does not overlap the recording");
  const Waveform canonical = ResampleWaveform(w, kCanonicalRate);
  const Waveform window =
      ExtractWindow(canonical, {std::max(center_time, 0.0), window_duration});
  // Same arithmetic as ExtractWindow for the window start.
  const double start_s =
      static_cast<double>(std::llround(std::max(center_time, 0.0) *
                                           kCanonicalRate -
                                       window.samples.size() / 2.0)) /
      kCanonicalRate;

  const auto normalized = GainNormalize(Cochleagram(window));
  const auto& env = normalized.env;
  const double rel = center_time - start_s;
  const auto first = static_cast<long>(std::ceil((rel - half) * kEnvelopeRate));
  const auto last = static_cast<long>(std::floor((rel + half) * kEnvelopeRate));
  const long lo = std::max(first, 0L);
  const long hi = std::min(last, static_cast<long>(env.frames()) - 1);
  std::vector<double> out(kNumCochlearChannels, 0.0);
  if (lo > hi) return out;
  for (long t = lo; t <= hi; ++t) {
    for (int c = 0; c < kNumCochlearChannels; ++c)
      out[c] += env.envelopes(static_cast<std::size_t>(t), c);
  }
  for (auto& v : out) v /= static_cast<double>(hi - lo + 1);
  return out;
}

}  // namespace soundtex
