// include/soundtex/resample.hpp

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

#include <cstddef>
#include <span>
#include <vector>

namespace soundtex {

/// Polyphase windowed-sinc resampler for a rational rate change in_rate ->
/// out_rate. The low-pass cutoff is `cutoff_fraction` of the lower of the
/// two Nyquist frequencies. Output sample n sits at time n / out_rate, so
/// the first output sample is aligned with the first input sample.
///
/// Each output sample is normalized by the sum of the kernel taps that fall
/// inside the input, which keeps DC exact up to the signal edges.
class RationalResampler {
 public:
  RationalResampler(int in_rate, int out_rate, double cutoff_fraction = 0.9,
                    int zero_crossings = 16);

  /// round(n_in * out_rate / in_rate)
  std::size_t OutputLength(std::size_t n_in) const;

  std::vector<double> Process(std::span<const double> input) const;

  int in_rate() const { return in_rate_; }
  int out_rate() const { return out_rate_; }

 private:
  int in_rate_;
  int out_rate_;
  long up_;    // L
  long down_;  // M
  long half_taps_;
  // taps_[phase * width + j] for j in [0, 2 * half_taps_]
  std::vector<double> taps_;
};

}  // namespace soundtex
