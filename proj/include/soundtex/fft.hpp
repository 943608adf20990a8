// include/soundtex/fft.hpp

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

#include <complex>
#include <span>
#include <vector>

namespace soundtex::fft {

using Complex = std::complex<double>;

/// Unnormalized forward DFT of a real sequence; returns the n/2 + 1
/// non-negative-frequency bins.
std::vector<Complex> RealForward(std::span<const double> x);

/// Inverse DFT of a full complex spectrum of length n, scaled by 1/n.
std::vector<Complex> ComplexInverse(std::span<const Complex> spectrum);

/// Inverse of RealForward: n real samples from n/2 + 1 bins, scaled by 1/n.
std::vector<double> RealInverse(std::span<const Complex> half_spectrum,
                                std::size_t n);

/// Frequency in Hz of bin k for an n-point transform at `rate`.
inline double BinFrequency(std::size_t k, std::size_t n, double rate) {
  return static_cast<double>(k) * rate / static_cast<double>(n);
}

}  // namespace soundtex::fft
