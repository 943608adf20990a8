// src/fft.cpp

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

#include "soundtex/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "soundtex/error.hpp"

namespace soundtex::fft {

namespace {

enum class PlanKind { kRealForward, kComplexInverse, kRealInverse };

// FFTW planning is not thread-safe, execution on caller-owned arrays is.
// Plans are built once per (kind, size) with FFTW_UNALIGNED so they can run
// on std::vector storage, and with FFTW_ESTIMATE so the chosen algorithm,
// and therefore every output bit, does not depend on timing.
class PlanCache {
 public:
  static PlanCache& Instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Get(PlanKind kind, std::size_t n) {
    std::lock_guard lock(mu_);
    auto it = plans_.find({kind, n});
    if (it != plans_.end()) return it->second;
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* real = fftw_alloc_real(n);
    auto* cplx = fftw_alloc_complex(n);
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::kRealForward:
        plan = fftw_plan_dft_r2c_1d(size, real, cplx, flags);
        break;
      case PlanKind::kComplexInverse: {
        auto* out = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(size, cplx, out, FFTW_BACKWARD, flags);
        fftw_free(out);
        break;
      }
      case PlanKind::kRealInverse:
        plan = fftw_plan_dft_c2r_1d(size, cplx, real, flags);
        break;
    }
    fftw_free(real);
    fftw_free(cplx);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(std::make_pair(kind, n), plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans_;
};

fftw_complex* AsFftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<Complex> RealForward(std::span<const double> x) {
  Require(!x.empty(), "FFT of empty sequence");
  const std::size_t n = x.size();
  std::vector<Complex> out(n / 2 + 1);
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kRealForward, n);
  fftw_execute_dft_r2c(plan, const_cast<double*>(x.data()), AsFftw(out.data()));
  return out;
}

std::vector<Complex> ComplexInverse(std::span<const Complex> spectrum) {
  Require(!spectrum.empty(), "FFT of empty sequence");
  const std::size_t n = spectrum.size();
  std::vector<Complex> in(spectrum.begin(), spectrum.end());
  std::vector<Complex> out(n);
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kComplexInverse, n);
  fftw_execute_dft(plan, AsFftw(in.data()), AsFftw(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> RealInverse(std::span<const Complex> half_spectrum,
                                std::size_t n) {
  Require(n > 0 && half_spectrum.size() == n / 2 + 1,
          "half spectrum size must be n/2 + 1");
  // c2r overwrites its input.
  std::vector<Complex> in(half_spectrum.begin(), half_spectrum.end());
  std::vector<double> out(n);
  fftw_plan plan = PlanCache::Instance().Get(PlanKind::kRealInverse, n);
  fftw_execute_dft_c2r(plan, AsFftw(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace soundtex::fft
