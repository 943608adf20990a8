// tests/datastore_test.cc

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

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "soundtex/datastore.hpp"
#include "soundtex/error.hpp"
#include "test_util.hpp"

namespace soundtex {
namespace {

namespace fs = std::filesystem;

template <typename F>
void ExpectCode(Errc code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

void WriteText(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

void WriteBytes(const fs::path& p, const std::vector<char>& b) {
  std::ofstream(p, std::ios::binary).write(b.data(), b.size());
}

// Values already representable in float32, so the round trip is exact.
Matrix FloatMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  auto m = testing::RandomMatrix(rows, cols, seed);
  for (auto& v : m.data()) v = static_cast<float>(v);
  return m;
}

TEST(Features, FileSizes) {
  testing::TempDir dir("ds");
  WriteFeatures(dir / "empty.stex", Matrix(0, 502));
  EXPECT_EQ(fs::file_size(dir / "empty.stex"), 24u);
  const auto store = WriteFeatures(dir / "small.stex", Matrix(2, 3, 1.5));
  EXPECT_EQ(fs::file_size(dir / "small.stex"), 48u);
  EXPECT_EQ(store.n_rows, 2u);
  EXPECT_EQ(store.dim, 3u);

  const auto bytes = testing::ReadBytes(dir / "small.stex");
  EXPECT_EQ(std::string(bytes.data(), 4), "STEX");
  std::uint32_t version;
  std::uint64_t rows, dim;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&rows, bytes.data() + 8, 8);
  std::memcpy(&dim, bytes.data() + 16, 8);
  EXPECT_EQ(version, 1u);
  EXPECT_EQ(rows, 2u);
  EXPECT_EQ(dim, 3u);
  float first;
  std::memcpy(&first, bytes.data() + 24, 4);
  EXPECT_EQ(first, 1.5f);
}

TEST(Features, RoundTrip) {
  testing::TempDir dir("ds");
  for (std::size_t rows : {0, 1, 2, 17}) {
    for (std::size_t dim : {32, 502}) {
      const auto m = FloatMatrix(rows, dim, rows * 1000 + dim);
      WriteFeatures(dir / "f.stex", m);
      const auto back = ReadFeatures(dir / "f.stex");
      EXPECT_EQ(back.rows(), rows);
      EXPECT_EQ(back.cols(), dim);
      EXPECT_EQ(back, m);
    }
  }
  // Float64 input is rounded to float32 exactly once.
  const auto raw = testing::RandomMatrix(3, 32, 5);
  WriteFeatures(dir / "r.stex", raw);
  const auto back = ReadFeatures(dir / "r.stex");
  for (std::size_t i = 0; i < raw.data().size(); ++i)
    EXPECT_EQ(back.data()[i], static_cast<double>(static_cast<float>(raw.data()[i])));
}

TEST(Features, WriteErrors) {
  testing::TempDir dir("ds");
  Matrix bad(2, 3, 0.0);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  ExpectCode(Errc::kNonFiniteInput, [&] { WriteFeatures(dir / "bad.stex", bad); });
  // Finite in float64 but overflows float32.
  Matrix huge(1, 2, 1e300);
  ExpectCode(Errc::kNonFiniteInput, [&] { WriteFeatures(dir / "huge.stex", huge); });
  EXPECT_FALSE(fs::exists(dir / "bad.stex"));
  ExpectCode(Errc::kIoError,
             [&] { WriteFeatures(dir / "no" / "such" / "dir.stex", Matrix(1, 2)); });
}

TEST(Features, ReadErrors) {
  testing::TempDir dir("ds");
  WriteFeatures(dir / "ok.stex", FloatMatrix(4, 32, 1));
  const auto good = testing::ReadBytes(dir / "ok.stex");

  auto magic = good;
  magic[0] = 'X';
  WriteBytes(dir / "magic.stex", magic);
  ExpectCode(Errc::kBadMagic, [&] { ReadFeatures(dir / "magic.stex"); });

  auto version = good;
  version[4] = 2;
  WriteBytes(dir / "version.stex", version);
  ExpectCode(Errc::kVersionMismatch, [&] { ReadFeatures(dir / "version.stex"); });

  auto truncated = good;
  truncated.resize(good.size() - 3);
  WriteBytes(dir / "short.stex", truncated);
  ExpectCode(Errc::kTruncatedFile, [&] { ReadFeatures(dir / "short.stex"); });

  auto oversize = good;
  oversize.push_back(0);
  WriteBytes(dir / "long.stex", oversize);
  ExpectCode(Errc::kTruncatedFile, [&] { ReadFeatures(dir / "long.stex"); });

  WriteBytes(dir / "tiny.stex", {'S', 'T'});
  EXPECT_THROW(ReadFeatures(dir / "tiny.stex"), Error);

  ExpectCode(Errc::kIoError, [&] { ReadFeatures(dir / "missing.stex"); });
}

TEST(Features, StreamReader) {
  testing::TempDir dir("ds");
  const auto m = FloatMatrix(5, 32, 2);
  WriteFeatures(dir / "s.stex", m);
  FeatureStreamReader reader(dir / "s.stex");
  EXPECT_EQ(reader.store().n_rows, 5u);
  EXPECT_EQ(reader.store().dim, 32u);
  std::vector<double> row;
  std::size_t i = 0;
  while (reader.Next(row)) {
    ASSERT_LT(i, 5u);
    EXPECT_TRUE(std::equal(row.begin(), row.end(), m.row(i).begin()));
    ++i;
  }
  EXPECT_EQ(i, 5u);
  EXPECT_EQ(ReadFeatureHeader(dir / "s.stex").n_rows, 5u);
}

TEST(Manifest, Examples) {
  testing::TempDir dir("ds");
  WriteText(dir / "empty.jsonl", "");
  EXPECT_TRUE(ReadManifest(dir / "empty.jsonl").empty());

  WriteText(dir / "one.jsonl", R"({"path": "a.wav", "center_s": 1.5, "label": "rain"})" "\n");
  const auto one = ReadManifest(dir / "one.jsonl");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].path, "a.wav");
  EXPECT_EQ(one[0].center_s, 1.5);
  EXPECT_EQ(one[0].label, "rain");
  EXPECT_EQ(one[0].line, 1u);

  WriteText(dir / "bad.jsonl",
            "{\"path\": \"a.wav\", \"center_s\": 1}\n"
            "{\"path\": \"b.wav\", \"center_s\": 2}\n"
            "{\"path\": \"c.wav\", \"center_s\": }\n");
  ManifestReader reader(dir / "bad.jsonl");
  EXPECT_EQ(reader.Next()->path, "a.wav");
  EXPECT_EQ(reader.Next()->path, "b.wav");
  try {
    reader.Next();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Manifest, LineValidation) {
  EXPECT_FALSE(ParseManifestLine(R"({"path":"x.wav","center_s":0})", 1).label);
  for (const char* bad : {R"({"center_s": 1})", R"({"path": "x.wav"})",
                          R"({"path": 3, "center_s": 1})",
                          R"({"path": "x.wav", "center_s": -1})",
                          R"({"path": "x.wav", "center_s": "1"})", "[1, 2]", "nope"}) {
    ExpectCode(Errc::kParseError, [&] { ParseManifestLine(bad, 7); });
  }
}

TEST(Manifest, RoundTripWithBlankLinesAndCrlf) {
  testing::TempDir dir("ds");
  WriteText(dir / "m.jsonl",
            "{\"path\": \"a.wav\", \"center_s\": 0.25}\r\n\n"
            "{\"path\": \"dir/b.wav\", \"center_s\": 3, \"label\": \"x\"}\n");
  const auto entries = ReadManifest(dir / "m.jsonl");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[1].line, 3u);
  WriteManifest(dir / "out.jsonl", entries);
  const auto again = ReadManifest(dir / "out.jsonl");
  ASSERT_EQ(again.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(again[i].path, entries[i].path);
    EXPECT_EQ(again[i].center_s, entries[i].center_s);
    EXPECT_EQ(again[i].label, entries[i].label);
  }
}

TEST(Models, ClusterRoundTrip) {
  testing::TempDir dir("ds");
  ClusterModel m;
  m.centroids = FloatMatrix(30, 502, 3);
  WriteModel(dir / "c.slbl", m);
  const auto bytes = testing::ReadBytes(dir / "c.slbl");
  EXPECT_EQ(std::string(bytes.data(), 4), "SLBL");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes.size(), 4 + 1 + 16 + 30 * 502 * 4u);
  const auto back = std::get<ClusterModel>(ReadModel(dir / "c.slbl"));
  EXPECT_EQ(back.centroids, m.centroids);
}

TEST(Models, BinaryAndSpectrumRoundTrip) {
  testing::TempDir dir("ds");
  for (auto kind : {ModelKind::kBinary, ModelKind::kSpectrum}) {
    BinaryCodeModel m;
    m.kind = kind;
    const std::size_t dim = kind == ModelKind::kBinary ? 502 : 32;
    m.axes = FloatMatrix(30, dim, 4);
    const auto mean = FloatMatrix(1, dim, 5);
    m.mean.assign(mean.data().begin(), mean.data().end());
    WriteModel(dir / "b.slbl", m);
    EXPECT_EQ(testing::ReadBytes(dir / "b.slbl")[4], static_cast<char>(kind));
    const auto back = std::get<BinaryCodeModel>(ReadModel(dir / "b.slbl"));
    EXPECT_EQ(back.kind, kind);
    EXPECT_EQ(back.mean, m.mean);
    EXPECT_EQ(back.axes, m.axes);
  }
  auto bytes = testing::ReadBytes(dir / "b.slbl");
  bytes[4] = 9;
  WriteBytes(dir / "k.slbl", bytes);
  EXPECT_THROW(ReadModel(dir / "k.slbl"), Error);
  bytes[0] = 'Z';
  WriteBytes(dir / "m.slbl", bytes);
  ExpectCode(Errc::kBadMagic, [&] { ReadModel(dir / "m.slbl"); });
}

TEST(LabelLines, Format) {
  EXPECT_EQ(FormatClusterLine(3, {7, 0.5, true}), "3\t7\t0.5");
  EXPECT_EQ(FormatClusterLine(0, {0, 0.0, true}), "0\t0\t0");
  EXPECT_EQ(FormatCodeLine(2, 0x3fffffffu), "2\t1073741823\t3fffffff");
  EXPECT_EQ(FormatCodeLine(0, 10), "0\t10\t0000000a");
}

TEST(CochleagramDump, RoundTrip) {
  testing::TempDir dir("ds");
  SubbandEnvelopes env{FloatMatrix(1500, 32, 6), kEnvelopeRate};
  WriteCochleagramDump(dir / "c.cgrm", env);
  EXPECT_EQ(fs::file_size(dir / "c.cgrm"), 4 + 16 + 1500 * 32 * 4u);
  EXPECT_EQ(ReadCochleagramDump(dir / "c.cgrm"), env.envelopes);
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
  testing::TempDir dir("ds");
  const std::string a = "first", b = "second version";
  AtomicWriteFile(dir / "x", std::span<const char>(a.data(), a.size()));
  AtomicWriteFile(dir / "x", std::span<const char>(b.data(), b.size()));
  const auto bytes = testing::ReadBytes(dir / "x");
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), b);
  EXPECT_EQ(std::distance(fs::directory_iterator(dir.path()), fs::directory_iterator()), 1);
}

}  // namespace
}  // namespace soundtex
