// src/audio.cpp

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

#include "soundtex/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "soundtex/error.hpp"
#include "soundtex/resample.hpp"

namespace soundtex {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::uint16_t block_align = 0;
};

double DecodeSample(const std::uint8_t* p, const FormatChunk& fmt) {
  if (fmt.format == kFormatFloat) {
    const float f = std::bit_cast<float>(ReadU32(p));
    return static_cast<double>(f);
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
  }
  return 0.0;  // unreachable, validated by caller
}

}  // namespace

void ValidateWaveform(const Waveform& w) {
  Require(w.sample_rate > 0, "waveform sample rate must be positive");
  Require(!w.samples.empty(), "waveform must hold at least one sample");
  for (double s : w.samples) {
    if (!std::isfinite(s))
      throw Error(Errc::kNonFiniteInput, "waveform sample is not finite");
  }
}

Waveform DecodeWavBytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12)
    throw Error(Errc::kCorruptFile, "file shorter than RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(Errc::kUnsupportedFormat, "not a RIFF/WAVE file");

  FormatChunk fmt;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    const std::uint32_t size = ReadU32(hdr + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16 || size > avail)
        throw Error(Errc::kCorruptFile, "truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      fmt.format = ReadU16(f);
      fmt.channels = ReadU16(f + 2);
      fmt.sample_rate = ReadU32(f + 4);
      fmt.block_align = ReadU16(f + 12);
      fmt.bits = ReadU16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 26)
          throw Error(Errc::kCorruptFile, "truncated WAVE_FORMAT_EXTENSIBLE");
        // The first two bytes of the sub-format GUID carry the format code.
        fmt.format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (size > avail)
        throw Error(Errc::kCorruptFile, "data chunk runs past end of file");
      data = bytes.subspan(body, size);
      have_data = true;
      break;
    }
    if (size > avail) throw Error(Errc::kCorruptFile, "truncated chunk");
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw Error(Errc::kCorruptFile, "missing fmt chunk");
  if (!have_data) throw Error(Errc::kCorruptFile, "missing data chunk");

  if (fmt.format == kFormatPcm) {
    if (fmt.bits != 8 && fmt.bits != 16 && fmt.bits != 24 && fmt.bits != 32)
      throw Error(Errc::kUnsupportedFormat,
                  "unsupported PCM bit depth " + std::to_string(fmt.bits));
  } else if (fmt.format == kFormatFloat) {
    if (fmt.bits != 32)
      throw Error(Errc::kUnsupportedFormat, "only 32-bit float is supported");
  } else {
    throw Error(Errc::kUnsupportedFormat,
                "non-PCM codec " + std::to_string(fmt.format));
  }
  if (fmt.channels != 1 && fmt.channels != 2)
    throw Error(Errc::kUnsupportedFormat, "only mono or stereo is supported");
  if (fmt.sample_rate == 0)
    throw Error(Errc::kCorruptFile, "zero sample rate");
  const std::size_t sample_bytes = fmt.bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt.channels;
  if (fmt.block_align != frame_bytes)
    throw Error(Errc::kCorruptFile, "block alignment disagrees with format");

  const std::size_t n_frames = data.size() / frame_bytes;
  if (n_frames == 0) throw Error(Errc::kEmptyAudio, "no samples in file");

  Waveform w;
  w.sample_rate = static_cast<int>(fmt.sample_rate);
  w.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const std::uint8_t* frame = data.data() + i * frame_bytes;
    double v;
    if (fmt.channels == 1) {
      v = DecodeSample(frame, fmt);
    } else {
      v = 0.5 * (DecodeSample(frame, fmt) +
                 DecodeSample(frame + sample_bytes, fmt));
    }
    if (!std::isfinite(v))
      throw Error(Errc::kCorruptFile, "non-finite float sample");
    w.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  return w;
}

Waveform DecodeAudio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodeWavBytes(bytes);
}

std::vector<std::uint8_t> EncodeWavBytes(const Waveform& w,
                                         WavEncoding encoding) {
  ValidateWaveform(w);
  const bool is_float = encoding == WavEncoding::kFloat32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(w.samples.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, is_float ? kFormatFloat : kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate) * (bits / 8));
  PutU16(out, bits / 8);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double s : w.samples) {
    if (is_float) {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    } else {
      const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
      const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      PutU16(out, static_cast<std::uint16_t>(v));
    }
  }
  return out;
}

void WriteWav(const std::filesystem::path& path, const Waveform& w,
              WavEncoding encoding) {
  const auto bytes = EncodeWavBytes(w, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIoError, "short write to " + path.string());
}

Waveform ResampleWaveform(const Waveform& w, int target_rate) {
  ValidateWaveform(w);
  Require(target_rate > 0, "target rate must be positive");
  if (target_rate == w.sample_rate) return w;
  const RationalResampler resampler(w.sample_rate, target_rate);
  Waveform out;
  out.sample_rate = target_rate;
  out.samples = resampler.Process(w.samples);
  if (out.samples.empty()) out.samples.push_back(0.0);
  return out;
}

Waveform ExtractWindow(const Waveform& w, const WindowSpec& spec) {
  ValidateWaveform(w);
  Require(spec.duration > 0.0, "window duration must be positive");
  Require(spec.center_time >= 0.0, "window center must be non-negative");
  const auto n = static_cast<long long>(
      std::llround(spec.duration * w.sample_rate));
  Require(n >= 1, "window shorter than one sample");
  const long long start =
      std::llround(spec.center_time * w.sample_rate - n / 2.0);
  const auto len = static_cast<long long>(w.samples.size());
  const long long lo = std::max(start, 0LL);
  const long long hi = std::min(start + n, len);
  if (lo >= hi)
    throw Error(Errc::kWindowFullyOutside,
                "window centered at " + std::to_string(spec.center_time) +
                    " s does not overlap the recording");
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.assign(static_cast<std::size_t>(n), 0.0);
  std::copy(w.samples.begin() + lo, w.samples.begin() + hi,
            out.samples.begin() + (lo - start));
  return out;
}

}  // namespace soundtex
