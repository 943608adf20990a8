// include/soundtex/datastore.hpp

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
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "soundtex/cochlear.hpp"
#include "soundtex/labelspace.hpp"
#include "soundtex/matrix.hpp"

namespace soundtex {

// Feature files ("STEX"):
//   magic "STEX" | version u32 = 1 | n_rows u64 | dim u64 | n_rows*dim f32
// Model files ("SLBL"):
//   magic "SLBL" | kind u8 | rows u64 | dim u64 | payload f32
//   cluster:          rows = k,      payload = centroids (k x dim)
//   binary/spectrum:  rows = n_bits, payload = mean (dim) then axes
// Cochleagram dumps ("CGRM"):
//   magic "CGRM" | rows u64 | cols u64 | rows*cols f32
// All integers and floats little-endian, matrices row-major.

inline constexpr std::uint32_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 24;

struct FeatureStore {
  std::filesystem::path path;
  std::uint64_t n_rows = 0;
  std::uint64_t dim = 0;
};

/// Writes rows as float32 via a temp file and rename.
FeatureStore WriteFeatures(const std::filesystem::path& path,
                           const Matrix& rows);

/// Validates the header against the file size before reading.
Matrix ReadFeatures(const std::filesystem::path& path);

FeatureStore ReadFeatureHeader(const std::filesystem::path& path);

/// Row-at-a-time reader for feature files too large to hold in memory.
class FeatureStreamReader {
 public:
  explicit FeatureStreamReader(const std::filesystem::path& path);

  const FeatureStore& store() const { return store_; }

  /// Fills `row` (resized to dim) with the next row; false at end.
  bool Next(std::vector<double>& row);

 private:
  FeatureStore store_;
  std::ifstream in_;
  std::uint64_t next_row_ = 0;
  std::vector<char> buffer_;
};

struct ManifestEntry {
  std::string path;
  double center_s = 0.0;
  std::optional<std::string> label;
  std::size_t line = 0;  // 1-based line in the manifest
};

/// JSON-lines manifest reader, one {"path", "center_s", "label"?} object
/// per line. Blank lines are skipped. Malformed lines raise ParseError
/// naming the line.
class ManifestReader {
 public:
  explicit ManifestReader(const std::filesystem::path& path);

  std::optional<ManifestEntry> Next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

ManifestEntry ParseManifestLine(const std::string& line, std::size_t line_no);
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   std::span<const ManifestEntry> entries);

using LabelModel = std::variant<ClusterModel, BinaryCodeModel>;

void WriteModel(const std::filesystem::path& path, const ClusterModel& model);
void WriteModel(const std::filesystem::path& path,
                const BinaryCodeModel& model);
LabelModel ReadModel(const std::filesystem::path& path);

/// "index<TAB>label<TAB>distance" for cluster labels.
std::string FormatClusterLine(std::size_t index, const LabelAssignment& a);
/// "index<TAB>label<TAB>code" with the code as 8 hex digits.
std::string FormatCodeLine(std::size_t index, std::uint32_t code);

void WriteCochleagramDump(const std::filesystem::path& path,
                          const SubbandEnvelopes& env);
Matrix ReadCochleagramDump(const std::filesystem::path& path);

/// Writes bytes to `path` through a sibling temp file and an atomic rename.
void AtomicWriteFile(const std::filesystem::path& path,
                     std::span<const char> bytes);

}  // namespace soundtex
