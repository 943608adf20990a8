// src/resample.cpp

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

#include "soundtex/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "soundtex/error.hpp"

namespace soundtex {

namespace {

constexpr double kKaiserBeta = 8.0;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double Kaiser(double x) {
  // x in [-1, 1]
  if (std::abs(x) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

RationalResampler::RationalResampler(int in_rate, int out_rate,
                                     double cutoff_fraction,
                                     int zero_crossings)
    : in_rate_(in_rate), out_rate_(out_rate) {
  Require(in_rate > 0 && out_rate > 0, "resampler rates must be positive");
  Require(cutoff_fraction > 0.0 && cutoff_fraction <= 1.0,
          "cutoff fraction must be in (0, 1]");
  Require(zero_crossings > 0, "zero crossings must be positive");
  const long g = std::gcd(in_rate, out_rate);
  up_ = out_rate / g;
  down_ = in_rate / g;

  // Work on the virtual high rate in_rate * L, where both the input and the
  // output grids land on integer sample positions.
  const double high_rate = static_cast<double>(in_rate) * up_;
  const double low_rate = std::min(in_rate, out_rate);
  const double cutoff = cutoff_fraction * low_rate / 2.0 / high_rate;
  const double half_width = zero_crossings * high_rate / low_rate;
  half_taps_ = static_cast<long>(std::ceil(half_width / up_)) + 1;

  const long width = 2 * half_taps_ + 1;
  taps_.assign(static_cast<std::size_t>(up_ * width), 0.0);
  for (long p = 0; p < up_; ++p) {
    for (long j = 0; j < width; ++j) {
      const double d = static_cast<double>(p + (half_taps_ - j) * up_);
      taps_[static_cast<std::size_t>(p * width + j)] =
          2.0 * cutoff * Sinc(2.0 * cutoff * d) * Kaiser(d / half_width);
    }
  }
}

std::size_t RationalResampler::OutputLength(std::size_t n_in) const {
  const auto num = static_cast<unsigned long long>(n_in) *
                   static_cast<unsigned long long>(out_rate_);
  return static_cast<std::size_t>((num + in_rate_ / 2) / in_rate_);
}

std::vector<double> RationalResampler::Process(
    std::span<const double> input) const {
  if (in_rate_ == out_rate_) return {input.begin(), input.end()};
  const std::size_t n_out = OutputLength(input.size());
  std::vector<double> out(n_out, 0.0);
  const long n_in = static_cast<long>(input.size());
  const long width = 2 * half_taps_ + 1;
  for (std::size_t n = 0; n < n_out; ++n) {
    const long long pos = static_cast<long long>(n) * down_;
    const long k0 = static_cast<long>(pos / up_);
    const long p = static_cast<long>(pos - static_cast<long long>(k0) * up_);
    const double* h = taps_.data() + p * width;
    const long first = k0 - half_taps_;
    const long j_lo = std::max(0L, -first);
    const long j_hi = std::min(width, n_in - first);
    double acc = 0.0;
    double norm = 0.0;
    for (long j = j_lo; j < j_hi; ++j) {
      acc += input[static_cast<std::size_t>(first + j)] * h[j];
      norm += h[j];
    }
    out[n] = norm != 0.0 ? acc / norm : 0.0;
  }
  return out;
}

}  // namespace soundtex
