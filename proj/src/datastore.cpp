// src/datastore.cpp

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

#include "soundtex/datastore.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iterator>
#include <system_error>

#include "soundtex/error.hpp"

namespace soundtex {

namespace fs = std::filesystem;

namespace {

constexpr char kFeatureMagic[4] = {'S', 'T', 'E', 'X'};
constexpr char kModelMagic[4] = {'S', 'L', 'B', 'L'};
constexpr char kDumpMagic[4] = {'C', 'G', 'R', 'M'};
constexpr std::size_t kModelHeaderBytes = 4 + 1 + 8 + 8;
constexpr std::size_t kDumpHeaderBytes = 4 + 8 + 8;

class ByteWriter {
 public:
  void Tag(const char (&tag)[4]) { bytes_.insert(bytes_.end(), tag, tag + 4); }
  void U8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) { Little(v, 4); }
  void U64(std::uint64_t v) { Little(v, 8); }
  void F32(double v) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f))
      throw Error(Errc::kNonFiniteInput, "value not representable as float32");
    U32(std::bit_cast<std::uint32_t>(f));
  }
  void F32s(std::span<const double> values) {
    for (double v : values) F32(v);
  }
  std::span<const char> bytes() const { return bytes_; }

 private:
  void Little(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i)
      bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::vector<char> bytes_;
};

std::uint64_t LoadLittle(const char* p, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

double LoadF32(const char* p) {
  return static_cast<double>(
      std::bit_cast<float>(static_cast<std::uint32_t>(LoadLittle(p, 4))));
}

std::vector<char> Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Payload size in bytes for rows x cols float32, or nullopt on overflow.
std::optional<std::uint64_t> PayloadBytes(std::uint64_t rows,
                                          std::uint64_t cols) {
  if (cols != 0 && rows > UINT64_MAX / cols) return std::nullopt;
  const std::uint64_t cells = rows * cols;
  if (cells > UINT64_MAX / 4) return std::nullopt;
  return cells * 4;
}

void ReadPayload(const char* p, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = LoadF32(p + 4 * i);
}

FeatureStore ParseFeatureHeader(const char* p, std::uint64_t file_size,
                                const fs::path& path) {
  if (file_size < 4 || std::memcmp(p, kFeatureMagic, 4) != 0)
    throw Error(Errc::kBadMagic, path.string() + " is not a STEX file");
  if (file_size < kFeatureHeaderBytes)
    throw Error(Errc::kTruncatedFile, path.string() + " header is truncated");
  const auto version = static_cast<std::uint32_t>(LoadLittle(p + 4, 4));
  if (version != kFeatureVersion)
    throw Error(Errc::kVersionMismatch,
                "STEX version " + std::to_string(version) + ", expected " +
                    std::to_string(kFeatureVersion));
  FeatureStore store{path, LoadLittle(p + 8, 8), LoadLittle(p + 16, 8)};
  const auto payload = PayloadBytes(store.n_rows, store.dim);
  if (!payload || *payload != file_size - kFeatureHeaderBytes)
    throw Error(Errc::kTruncatedFile,
                path.string() + ": size " + std::to_string(file_size) +
                    " disagrees with header " + std::to_string(store.n_rows) +
                    " x " + std::to_string(store.dim));
  return store;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

}  // namespace

void AtomicWriteFile(const fs::path& path, std::span<const char> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(Errc::kIoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::kIoError, "cannot rename onto " + path.string());
  }
}

FeatureStore WriteFeatures(const fs::path& path, const Matrix& rows) {
  ByteWriter w;
  w.Tag(kFeatureMagic);
  w.U32(kFeatureVersion);
  w.U64(rows.rows());
  w.U64(rows.cols());
  w.F32s(rows.data());
  AtomicWriteFile(path, w.bytes());
  return {path, rows.rows(), rows.cols()};
}

FeatureStore ReadFeatureHeader(const fs::path& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) throw Error(Errc::kIoError, "cannot stat " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  char header[kFeatureHeaderBytes] = {};
  in.read(header, kFeatureHeaderBytes);
  return ParseFeatureHeader(header, size, path);
}

Matrix ReadFeatures(const fs::path& path) {
  const auto bytes = Slurp(path);
  const auto store = ParseFeatureHeader(bytes.data(), bytes.size(), path);
  Matrix out(store.n_rows, store.dim);
  ReadPayload(bytes.data() + kFeatureHeaderBytes, out.data());
  return out;
}

FeatureStreamReader::FeatureStreamReader(const fs::path& path)
    : store_(ReadFeatureHeader(path)), in_(path, std::ios::binary) {
  if (!in_) throw Error(Errc::kIoError, "cannot open " + path.string());
  in_.seekg(static_cast<std::streamoff>(kFeatureHeaderBytes));
  buffer_.resize(store_.dim * 4);
}

bool FeatureStreamReader::Next(std::vector<double>& row) {
  if (next_row_ >= store_.n_rows) return false;
  in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!in_)
    throw Error(Errc::kTruncatedFile, store_.path.string() + " ended early");
  row.resize(store_.dim);
  ReadPayload(buffer_.data(), row);
  ++next_row_;
  return true;
}

ManifestEntry ParseManifestLine(const std::string& line, std::size_t line_no) {
  const auto fail = [&](const std::string& why) {
    return Error(Errc::kParseError,
                 "manifest line " + std::to_string(line_no) + ": " + why);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(e.what());
  }
  if (!j.is_object()) throw fail("expected a JSON object");
  if (!j.contains("path") || !j["path"].is_string())
    throw fail("missing string field \"path\"");
  if (!j.contains("center_s") || !j["center_s"].is_number())
    throw fail("missing numeric field \"center_s\"");
  ManifestEntry entry;
  entry.path = j["path"].get<std::string>();
  entry.center_s = j["center_s"].get<double>();
  entry.line = line_no;
  if (!std::isfinite(entry.center_s) || entry.center_s < 0.0)
    throw fail("center_s must be a finite non-negative number");
  if (j.contains("label") && !j["label"].is_null()) {
    if (!j["label"].is_string()) throw fail("\"label\" must be a string");
    entry.label = j["label"].get<std::string>();
  }
  return entry;
}

ManifestReader::ManifestReader(const fs::path& path)
    : path_(path), in_(path) {
  if (!in_) throw Error(Errc::kIoError, "cannot open " + path.string());
}

std::optional<ManifestEntry> ManifestReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    return ParseManifestLine(line, line_no_);
  }
  return std::nullopt;
}

std::vector<ManifestEntry> ReadManifest(const fs::path& path) {
  ManifestReader reader(path);
  std::vector<ManifestEntry> entries;
  while (auto e = reader.Next()) entries.push_back(std::move(*e));
  return entries;
}

void WriteManifest(const fs::path& path,
                   std::span<const ManifestEntry> entries) {
  std::string text;
  for (const auto& e : entries) {
    nlohmann::json j;
    j["path"] = e.path;
    j["center_s"] = e.center_s;
    if (e.label) j["label"] = *e.label;
    text += j.dump();
    text += '\n';
  }
  AtomicWriteFile(path, text);
}

void WriteModel(const fs::path& path, const ClusterModel& model) {
  ByteWriter w;
  w.Tag(kModelMagic);
  w.U8(static_cast<std::uint8_t>(ModelKind::kCluster));
  w.U64(model.centroids.rows());
  w.U64(model.centroids.cols());
  w.F32s(model.centroids.data());
  AtomicWriteFile(path, w.bytes());
}

void WriteModel(const fs::path& path, const BinaryCodeModel& model) {
  Require(model.axes.cols() == model.mean.size(),
          "axes and mean dimensions differ");
  ByteWriter w;
  w.Tag(kModelMagic);
  w.U8(static_cast<std::uint8_t>(model.kind));
  w.U64(model.axes.rows());
  w.U64(model.mean.size());
  w.F32s(model.mean);
  w.F32s(model.axes.data());
  AtomicWriteFile(path, w.bytes());
}

LabelModel ReadModel(const fs::path& path) {
  const auto bytes = Slurp(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0)
    throw Error(Errc::kBadMagic, path.string() + " is not a SLBL file");
  if (bytes.size() < kModelHeaderBytes)
    throw Error(Errc::kTruncatedFile, path.string() + " header is truncated");
  const auto kind = static_cast<std::uint8_t>(bytes[4]);
  const std::uint64_t rows = LoadLittle(bytes.data() + 5, 8);
  const std::uint64_t dim = LoadLittle(bytes.data() + 13, 8);
  const char* payload = bytes.data() + kModelHeaderBytes;
  const std::uint64_t have = bytes.size() - kModelHeaderBytes;

  if (kind == static_cast<std::uint8_t>(ModelKind::kCluster)) {
    const auto need = PayloadBytes(rows, dim);
    if (!need || *need != have)
      throw Error(Errc::kTruncatedFile, path.string() + " payload size mismatch");
    ClusterModel model;
    model.centroids = Matrix(rows, dim);
    ReadPayload(payload, model.centroids.data());
    return model;
  }
  if (kind == static_cast<std::uint8_t>(ModelKind::kBinary) ||
      kind == static_cast<std::uint8_t>(ModelKind::kSpectrum)) {
    const auto need = PayloadBytes(rows + 1, dim);
    if (!need || *need != have)
      throw Error(Errc::kTruncatedFile, path.string() + " payload size mismatch");
    BinaryCodeModel model;
    model.kind = static_cast<ModelKind>(kind);
    model.mean.resize(dim);
    ReadPayload(payload, model.mean);
    model.axes = Matrix(rows, dim);
    ReadPayload(payload + 4 * dim, model.axes.data());
    return model;
  }
  throw Error(Errc::kCorruptFile,
              "unknown SLBL model kind " + std::to_string(kind));
}

std::string FormatClusterLine(std::size_t index, const LabelAssignment& a) {
  return std::to_string(index) + '\t' + std::to_string(a.label) + '\t' +
         FormatDouble(a.distance);
}

std::string FormatCodeLine(std::size_t index, std::uint32_t code) {
  char hex[9];
  std::snprintf(hex, sizeof(hex), "%08x", code);
  return std::to_string(index) + '\t' + std::to_string(code) + '\t' + hex;
}

void WriteCochleagramDump(const fs::path& path, const SubbandEnvelopes& env) {
  ByteWriter w;
  w.Tag(kDumpMagic);
  w.U64(env.envelopes.rows());
  w.U64(env.envelopes.cols());
  w.F32s(env.envelopes.data());
  AtomicWriteFile(path, w.bytes());
}

Matrix ReadCochleagramDump(const fs::path& path) {
  const auto bytes = Slurp(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kDumpMagic, 4) != 0)
    throw Error(Errc::kBadMagic, path.string() + " is not a CGRM file");
  if (bytes.size() < kDumpHeaderBytes)
    throw Error(Errc::kTruncatedFile, path.string() + " header is truncated");
  const std::uint64_t rows = LoadLittle(bytes.data() + 4, 8);
  const std::uint64_t cols = LoadLittle(bytes.data() + 12, 8);
  const auto need = PayloadBytes(rows, cols);
  if (!need || *need != bytes.size() - kDumpHeaderBytes)
    throw Error(Errc::kTruncatedFile, path.string() + " payload size mismatch");
  Matrix out(rows, cols);
  ReadPayload(bytes.data() + kDumpHeaderBytes, out.data());
  return out;
}

}  // namespace soundtex
