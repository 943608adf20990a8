// tests/texture_test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "soundtex/error.hpp"
#include "soundtex/fft.hpp"
#include "soundtex/texture.hpp"
#include "test_util.hpp"

namespace soundtex {
namespace {

constexpr double kPi = std::numbers::pi;

SubbandEnvelopes Env(std::size_t frames, std::size_t channels, double fill) {
  return {Matrix(frames, channels, fill), kEnvelopeRate};
}

SubbandEnvelopes NoiseEnv(std::size_t frames, std::uint64_t seed) {
  // Positive, independent channels.
  auto m = testing::RandomMatrix(frames, 32, seed, 0.1);
  for (auto& v : m.data()) v = std::abs(v) + 0.5;
  return {std::move(m), kEnvelopeRate};
}

SubbandEnvelopes AmEnv(std::size_t frames, double rate_hz) {
  SubbandEnvelopes env = Env(frames, 32, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int c = 0; c < 32; ++c)
      env.envelopes(t, c) =
          (1.0 + 0.1 * c) * (1.0 + 0.5 * std::cos(2 * kPi * rate_hz * t / 400.0 + c));
  }
  return env;
}

TEST(Loudness, Examples) {
  EXPECT_EQ(Loudness(Env(1500, 32, 0.0)), 0.0);
  EXPECT_NEAR(Loudness(Env(1500, 32, 1.0)), 5.656854249492381, 1e-6);

  SubbandEnvelopes env = Env(10, 32, 0.0);
  for (std::size_t t = 0; t < 10; ++t) env.envelopes(t, 0) = t < 5 ? 1.0 : 3.0;
  EXPECT_DOUBLE_EQ(Loudness(env), 2.0);

  env = Env(3, 32, 0.0);
  env.envelopes(0, 4) = 7.0;
  env.envelopes(1, 4) = 1.0;
  env.envelopes(2, 4) = 2.0;
  EXPECT_DOUBLE_EQ(Loudness(env), 2.0);
  EXPECT_THROW(Loudness(Env(0, 32, 0.0)), Error);
}

TEST(GainNormalize, Examples) {
  const auto base = NoiseEnv(200, 1);
  auto scaled = base;
  for (auto& v : scaled.envelopes.data()) v *= 3.0;
  const auto a = GainNormalize(base);
  const auto b = GainNormalize(scaled);
  EXPECT_NEAR(b.loudness, 3.0 * a.loudness, 1e-9 * a.loudness);
  for (std::size_t i = 0; i < a.env.envelopes.data().size(); ++i)
    EXPECT_NEAR(a.env.envelopes.data()[i], b.env.envelopes.data()[i], 1e-6);

  const auto z = GainNormalize(Env(20, 32, 0.0));
  EXPECT_EQ(z.loudness, 0.0);
  for (double v : z.env.envelopes.data()) EXPECT_EQ(v, 0.0);

  // Loudness exactly 1: every frame has a single unit entry.
  SubbandEnvelopes unit = Env(20, 32, 0.0);
  for (std::size_t t = 0; t < 20; ++t) unit.envelopes(t, t % 32) = 1.0;
  const auto u = GainNormalize(unit);
  EXPECT_DOUBLE_EQ(u.loudness, 1.0);
  for (std::size_t i = 0; i < unit.envelopes.data().size(); ++i)
    EXPECT_NEAR(u.env.envelopes.data()[i], unit.envelopes.data()[i], 1e-12);
}

TEST(MarginalStats, Examples) {
  SubbandEnvelopes env = Env(100, 3, 0.0);
  for (std::size_t t = 0; t < 100; ++t) {
    env.envelopes(t, 0) = 2.0;
    env.envelopes(t, 1) = t % 2 ? 3.0 : 1.0;
  }
  const auto m = ComputeMarginalStats(env);
  EXPECT_DOUBLE_EQ(m.mu[0], 2.0);
  EXPECT_DOUBLE_EQ(m.sigma[0], 0.0);
  EXPECT_DOUBLE_EQ(m.sigma_tilde[0], 0.0);
  EXPECT_DOUBLE_EQ(m.mu[1], 2.0);
  EXPECT_DOUBLE_EQ(m.sigma[1], 1.0);
  EXPECT_DOUBLE_EQ(m.sigma_tilde[1], 0.5);
  EXPECT_EQ(m.mu[2], 0.0);
  EXPECT_EQ(m.sigma[2], 0.0);
  EXPECT_EQ(m.sigma_tilde[2], 0.0);
}

TEST(BandCorrelations, PairEnumeration) {
  // Brute-force enumeration of all j < k with an allowed offset.
  std::vector<std::pair<int, int>> expected;
  for (int off : {1, 2, 3, 5})
    for (int j = 0; j < 32; ++j)
      for (int k = j + 1; k < 32; ++k)
        if (k - j == off) expected.emplace_back(j, k);
  EXPECT_EQ(expected.size(), 117u);
  EXPECT_EQ(CorrelationPairs(32), expected);
  EXPECT_EQ(BandCorrelations(NoiseEnv(50, 2)).size(), 117u);
}

TEST(BandCorrelations, MatchesDirectPearson) {
  auto env = NoiseEnv(300, 3);
  // Mix neighbours so correlations are not all near zero.
  for (std::size_t t = 0; t < 300; ++t)
    for (int c = 31; c > 0; --c) env.envelopes(t, c) += 0.7 * env.envelopes(t, c - 1);
  const auto rho = BandCorrelations(env);
  const auto pairs = CorrelationPairs(32);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto a = env.envelopes.column(pairs[p].first);
    const auto b = env.envelopes.column(pairs[p].second);
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
      sab += (a[t] - ma) * (b[t] - mb);
      saa += (a[t] - ma) * (a[t] - ma);
      sbb += (b[t] - mb) * (b[t] - mb);
    }
    EXPECT_NEAR(rho[p], sab / std::sqrt(saa * sbb), 1e-12);
    EXPECT_GE(rho[p], -1.0);
    EXPECT_LE(rho[p], 1.0);
  }
}

TEST(BandCorrelations, Examples) {
  auto env = NoiseEnv(1500, 4);
  for (double r : BandCorrelations(env)) EXPECT_LT(std::abs(r), 0.15);

  for (std::size_t t = 0; t < 1500; ++t)
    for (int c = 0; c < 32; ++c) env.envelopes(t, c) = env.envelopes(t, 0);
  const auto same = BandCorrelations(env);
  for (int p = 0; p < 31; ++p) EXPECT_NEAR(same[p], 1.0, 1e-9);

  // A constant channel contributes zeros.
  env = NoiseEnv(100, 5);
  for (std::size_t t = 0; t < 100; ++t) env.envelopes(t, 0) = 0.4;
  const auto rho = BandCorrelations(env);
  EXPECT_EQ(rho[0], 0.0);   // (0, 1)
  EXPECT_EQ(rho[31], 0.0);  // (0, 2)
  EXPECT_THROW(BandCorrelations(Env(1, 32, 1.0)), Error);
}

TEST(ModulationFilterbank, Centers) {
  const auto mb = BuildModulationFilterbank();
  const auto c = mb.center_frequencies();
  ASSERT_EQ(mb.num_filters(), 10);
  const double expected[] = {0.5, 0.9729438587881943, 1.8932395047073236,
                             3.6840314986403864, 7.168711644368863,
                             13.949507939624212, 27.14417616594906,
                             52.81951900505004, 102.78085328021947, 200.0};
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(c[i], expected[i], 1e-6 * expected[i]);
    if (i > 0) {
      EXPECT_GT(c[i], c[i - 1]);
      EXPECT_NEAR(c[i] / c[i - 1], std::pow(400.0, 1.0 / 9), 1e-6);
    }
  }
  EXPECT_NEAR(c[9], 200.0, 1e-6);
}

TEST(ModulationFilterbank, PeaksAndQ) {
  const auto mb = BuildModulationFilterbank();
  for (int j = 0; j < 10; ++j) {
    const double fc = mb.center_frequencies()[j];
    EXPECT_NEAR(mb.Response(j, fc), 1.0, 0.01);
    // Half-power points bracket a bandwidth of fc / Q.
    auto edge = [&](double dir) {
      double lo = fc, hi = dir > 0 ? fc * 4 : fc / 4;
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (std::pow(mb.Response(j, mid), 2) > 0.5 ? lo : hi) = mid;
      }
      return lo;
    };
    EXPECT_NEAR(edge(1) - edge(-1), fc / 2.0, 1e-6 * fc);
    EXPECT_EQ(mb.Response(j, 0.0), 0.0);
    EXPECT_EQ(mb.Response(j, fc * 8), 0.0);
  }
}

TEST(ModulationPower, ConstantChannelHasNone) {
  const auto env = Env(1500, 32, 0.7);
  const auto mp = ComputeModulationPower(env, BuildModulationFilterbank(),
                                         std::vector<double>(32, 0.0));
  for (double v : mp.b.data()) EXPECT_NEAR(v, 0.0, 1e-20);
  for (double v : mp.b_tilde.data()) EXPECT_EQ(v, 0.0);
}

TEST(ModulationPower, FourHertzTone) {
  const auto mb = BuildModulationFilterbank();
  const auto env = AmEnv(1500, 4.0);
  const auto m = ComputeMarginalStats(env);
  const auto mp = ComputeModulationPower(env, mb, m.sigma);
  int nearest = 0;
  for (int j = 1; j < 10; ++j)
    if (std::abs(mb.center_frequencies()[j] - 4.0) <
        std::abs(mb.center_frequencies()[nearest] - 4.0))
      nearest = j;
  EXPECT_EQ(nearest, 3);
  for (int c = 0; c < 32; ++c) {
    double best = -1, sum = 0;
    int arg = -1;
    for (int j = 0; j < 10; ++j) {
      if (mp.b(c, j) > best) best = mp.b(c, j), arg = j;
      sum += mp.b_tilde(c, j);
    }
    EXPECT_EQ(arg, nearest);
    EXPECT_NEAR(sum, 1.0, 0.35);
  }
}

TEST(ModulationPower, MatchesTimeDomainFilterOutput) {
  // Oracle: explicit filtering by inverse FFT and a time-domain mean square.
  const auto mb = BuildModulationFilterbank();
  const auto env = NoiseEnv(1500, 8);
  const auto m = ComputeMarginalStats(env);
  const auto mp = ComputeModulationPower(env, mb, m.sigma);
  const auto gains = mb.SampledResponses(1500, 400);
  for (int c : {0, 13, 31}) {
    std::vector<double> col = env.envelopes.column(c);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
    for (auto& v : col) v -= mean;
    const auto spec = fft::RealForward(col);
    for (int j = 0; j < 10; ++j) {
      std::vector<std::complex<double>> f(spec.size());
      for (std::size_t k = 0; k < spec.size(); ++k) f[k] = spec[k] * gains[j][k];
      const auto y = fft::RealInverse(f, col.size());
      double ms = 0;
      for (double v : y) ms += v * v;
      ms /= y.size();
      EXPECT_NEAR(mp.b(c, j), ms, 1e-9 * ms + 1e-18);
      EXPECT_NEAR(mp.b_tilde(c, j), std::sqrt(ms) / m.sigma[c], 1e-9);
    }
  }
}

TEST(AssembleTexture, LayoutAndSilence) {
  const auto tex = AssembleTexture(AmEnv(1500, 4.0));
  ASSERT_EQ(tex.flat.size(), 502u);
  EXPECT_EQ(tex.mu.size(), 32u);
  EXPECT_EQ(tex.sigma_tilde.size(), 32u);
  EXPECT_EQ(tex.rho.size(), 117u);
  EXPECT_EQ(tex.b_tilde.rows(), 32u);
  EXPECT_EQ(tex.b_tilde.cols(), 10u);
  for (int i = 0; i < 32; ++i) {
    EXPECT_DOUBLE_EQ(tex.flat[i], tex.mu[i] / 64);
    EXPECT_DOUBLE_EQ(tex.flat[32 + i], tex.sigma_tilde[i] / 64);
  }
  for (int i = 0; i < 117; ++i) EXPECT_DOUBLE_EQ(tex.flat[64 + i], tex.rho[i] / 117);
  for (int i = 0; i < 320; ++i)
    EXPECT_DOUBLE_EQ(tex.flat[181 + i], tex.b_tilde.data()[i] / 320);
  EXPECT_DOUBLE_EQ(tex.flat[501], tex.loudness);
  for (double v : tex.mu) EXPECT_GE(v, 0.0);
  for (double v : tex.b_tilde.data()) EXPECT_GE(v, 0.0);

  const auto zero = AssembleTexture(Env(1500, 32, 0.0));
  for (double v : zero.flat) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(AssembleTexture(Env(100, 8, 1.0)), Error);
}

TEST(AssembleTexture, GlobalScaleOnlyMovesLoudness) {
  const auto base = AmEnv(1500, 4.0);
  auto scaled = base;
  for (auto& v : scaled.envelopes.data()) v *= 2.5;
  const auto a = AssembleTexture(base), b = AssembleTexture(scaled);
  for (int i = 0; i < 501; ++i)
    EXPECT_NEAR(a.flat[i], b.flat[i], 1e-5 * std::abs(a.flat[i]) + 1e-12) << i;
  EXPECT_NEAR(b.flat[501], 2.5 * a.flat[501], 1e-5 * a.flat[501]);
}

TEST(AssembleTexture, WaveformGainInvariance) {
  Waveform w{std::vector<double>(60000), 16000};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist(0.0, 0.2);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = dist(rng) * (1.0 + 0.8 * std::sin(2 * kPi * 4 * i / 16000.0));
  const auto base = TextureFromWindow(w);
  for (double alpha : {0.5, 2.0}) {
    Waveform s = w;
    for (auto& v : s.samples) v *= alpha;
    const auto tex = TextureFromWindow(s);
    for (int i = 0; i < 501; ++i)
      ASSERT_NEAR(tex.flat[i], base.flat[i], 1e-5 * std::abs(base.flat[i]) + 1e-12) << i;
    EXPECT_NEAR(tex.loudness / base.loudness, std::pow(alpha, 0.3), 1e-5);
  }
}

TEST(AssembleTexture, TimePermutationOnlyMovesModulation) {
  const auto base = AmEnv(1500, 4.0);
  auto shuffled = base;
  std::vector<std::size_t> order(1500);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  for (std::size_t t = 0; t < 1500; ++t)
    for (int c = 0; c < 32; ++c) shuffled.envelopes(t, c) = base.envelopes(order[t], c);
  const auto a = AssembleTexture(base), b = AssembleTexture(shuffled);
  for (int i = 0; i < 32; ++i) {
    EXPECT_NEAR(a.mu[i], b.mu[i], 1e-12);
    EXPECT_NEAR(a.sigma_tilde[i], b.sigma_tilde[i], 1e-12);
  }
  for (int i = 0; i < 117; ++i) EXPECT_NEAR(a.rho[i], b.rho[i], 1e-12);
  double diff = 0;
  for (std::size_t i = 0; i < 320; ++i)
    diff = std::max(diff, std::abs(a.b_tilde.data()[i] - b.b_tilde.data()[i]));
  EXPECT_GT(diff, 0.1);
}

TEST(AssembleTexture, BitwiseDeterministic) {
  const auto env = NoiseEnv(1500, 9);
  EXPECT_EQ(AssembleTexture(env).flat, AssembleTexture(env).flat);
}

TEST(SpectrumSnapshot, Examples) {
  const Waveform zero{std::vector<double>(32000, 0.0), 16000};
  const auto z = SpectrumSnapshot(zero, 1.0);
  ASSERT_EQ(z.size(), 32u);
  for (double v : z) EXPECT_EQ(v, 0.0);

  const auto& fb = CanonicalFilterbank();
  for (int k : {5, 16, 27}) {
    const auto w = testing::Sine(fb.center_frequencies()[k], 0.5, 2.0, 16000);
    for (double center : {0.0, 1.0, 2.0}) {
      const auto s = SpectrumSnapshot(w, center);
      ASSERT_EQ(s.size(), 32u);
      EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), k);
    }
  }
  // 44.1 kHz input is resampled first.
  const auto w44 = testing::Sine(fb.center_frequencies()[20], 0.5, 1.0, 44100);
  const auto s = SpectrumSnapshot(w44, 0.5);
  EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), 20);

  for (double bad : {-0.1, 2.1}) {
    try {
      SpectrumSnapshot(zero, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kWindowFullyOutside);
    }
  }
}

}  // namespace
}  // namespace soundtex
