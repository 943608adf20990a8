// src/commands.cpp

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

#include "soundtex/commands.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "soundtex/datastore.hpp"
#include "soundtex/error.hpp"
#include "soundtex/eval.hpp"
#include "soundtex/texture.hpp"

namespace soundtex {

namespace fs = std::filesystem;

namespace {

std::string Num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * fraction);
  return buf;
}

fs::path ResolveEntry(const fs::path& manifest, const std::string& entry) {
  fs::path p(entry);
  if (p.is_relative()) p = manifest.parent_path() / p;
  return p;
}

using RowFn = std::vector<double> (*)(const Waveform&, const ManifestEntry&,
                                      const RunConfig&);

std::vector<double> TextureRow(const Waveform& audio, const ManifestEntry& e,
                               const RunConfig& config) {
  const Waveform canonical = ResampleWaveform(audio, kCanonicalRate);
  const Waveform window =
      ExtractWindow(canonical, {e.center_s, config.window_duration});
  return TextureFromWindow(window).flat;
}

std::vector<double> SpectrumRow(const Waveform& audio, const ManifestEntry& e,
                                const RunConfig& config) {
  return SpectrumSnapshot(audio, e.center_s, config.window_duration);
}

int RunManifest(const fs::path& manifest, const fs::path& out_features,
                const RunConfig& config, std::size_t dim, RowFn row_fn,
                std::ostream& out, std::ostream& err) {
  ValidateRunConfig(config);
  std::vector<ManifestEntry> entries;
  try {
    entries = ReadManifest(manifest);
  } catch (const Error& e) {
    err << "unusable manifest: " << e.what() << '\n';
    return kExitUnusableInput;
  }

  Matrix rows(entries.size(), dim);
  std::vector<std::string> failures(entries.size());
  ParallelFor(entries.size(), config.workers, [&](std::size_t i) {
    try {
      const Waveform audio =
          DecodeAudio(ResolveEntry(manifest, entries[i].path));
      const auto row = row_fn(audio, entries[i], config);
      std::copy(row.begin(), row.end(), rows.row(i).begin());
    } catch (const std::exception& e) {
      failures[i] = e.what();
      if (failures[i].empty()) failures[i] = "unknown error";
    }
  });

  std::string report;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (failures[i].empty()) continue;
    ++failed;
    report += std::to_string(i) + '\t' + std::to_string(entries[i].line) +
              '\t' + entries[i].path + '\t' + failures[i] + '\n';
    err << "entry " << i << " (" << entries[i].path << "): " << failures[i]
        << '\n';
  }
  try {
    WriteFeatures(out_features, rows);
    const fs::path sidecar = ErrorReportPath(out_features);
    if (failed > 0) {
      AtomicWriteFile(sidecar, report);
    } else {
      std::error_code ignored;
      fs::remove(sidecar, ignored);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
  out << "rows\t" << entries.size() << "\ndim\t" << dim << "\nfailed\t"
      << failed << '\n';
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

void ValidateRunConfig(const RunConfig& config) {
  Require(config.window_duration > 0.0, "window duration must be positive");
  Require(config.k >= 1, "k must be at least 1");
  Require(config.n_bits >= 1 && config.n_bits <= 32,
          "bits must be in [1, 32]");
  Require(config.workers >= 1, "workers must be at least 1");
}

fs::path ErrorReportPath(const fs::path& features) {
  fs::path p = features;
  p += ".errors.tsv";
  return p;
}

fs::path RetainedMaskPath(const fs::path& model) {
  fs::path p = model;
  p += ".retained";
  return p;
}

int CmdExtract(const fs::path& manifest, const fs::path& out_features,
               const RunConfig& config, std::ostream& out, std::ostream& err) {
  return RunManifest(manifest, out_features, config, kTextureDim, &TextureRow,
                     out, err);
}

int CmdSpectrum(const fs::path& manifest, const fs::path& out_features,
                const RunConfig& config, std::ostream& out, std::ostream& err) {
  return RunManifest(manifest, out_features, config, kNumCochlearChannels,
                     &SpectrumRow, out, err);
}

FitKind ParseFitKind(const std::string& name) {
  if (name == "cluster") return FitKind::kCluster;
  if (name == "binary") return FitKind::kBinary;
  if (name == "spectrum") return FitKind::kSpectrum;
  throw Error(Errc::kInvalidArgument, "unknown model kind " + name);
}

int CmdFit(const fs::path& features, FitKind kind, const fs::path& out_model,
           const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    ValidateRunConfig(config);
    const Matrix x = ReadFeatures(features);
    if (kind == FitKind::kCluster) {
      KMeansOptions opts;
      opts.workers = config.workers;
      const auto model = FitKMeans(x, config.k, config.seed, opts);
      const auto retained = PruneOutliers(model, x, config.workers);
      WriteModel(out_model, model);
      std::string mask;
      std::size_t kept = 0;
      for (bool r : retained) {
        mask += r ? "1\n" : "0\n";
        kept += r ? 1 : 0;
      }
      AtomicWriteFile(RetainedMaskPath(out_model), mask);
      out << "kind\tcluster\nk\t" << model.k() << "\ninertia\t"
          << Num(model.inertia) << "\nretained\t" << kept << "\nretained_fraction\t"
          << Num(static_cast<double>(kept) / x.rows()) << '\n';
    } else {
      const auto model = kind == FitKind::kSpectrum
                             ? FitSpectrumModel(x, config.n_bits)
                             : FitPca(x, config.n_bits);
      WriteModel(out_model, model);
      out << "kind\t" << (kind == FitKind::kSpectrum ? "spectrum" : "binary")
          << "\nbits\t" << model.n_bits() << "\ndim\t" << model.dim()
          << "\ntop_eigenvalue\t" << Num(model.eigenvalues.front()) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

int CmdAssign(const fs::path& features, const fs::path& model_path,
              const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    ValidateRunConfig(config);
    const LabelModel model = ReadModel(model_path);
    const FeatureStore header = ReadFeatureHeader(features);
    const std::size_t model_dim = std::visit(
        [](const auto& m) { return static_cast<std::size_t>(m.dim()); }, model);
    if (header.dim != model_dim)
      throw Error(Errc::kDimensionMismatch,
                  "features have dim " + std::to_string(header.dim) +
                      ", model expects " + std::to_string(model_dim));
    FeatureStreamReader reader(features);
    std::vector<double> row;
    std::size_t index = 0;
    if (const auto* cluster = std::get_if<ClusterModel>(&model)) {
      std::vector<std::uint32_t> labels;
      while (reader.Next(row)) {
        const auto a = AssignCluster(*cluster, row);
        labels.push_back(a.label);
        out << FormatClusterLine(index++, a) << '\n';
      }
      if (!labels.empty()) {
        const auto stats = ComputeLabelStatistics(labels, cluster->k());
        out << "# chance\t" << Percent(stats.chance) << '\t' << Num(stats.chance)
            << "\n# majority\t" << Percent(stats.majority) << '\t'
            << Num(stats.majority) << '\n';
      }
    } else {
      const auto& coder = std::get<BinaryCodeModel>(model);
      while (reader.Next(row))
        out << FormatCodeLine(index++, EncodeBinary(coder, row)) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

int CmdSweepK(const fs::path& features, std::span<const int> ks,
              const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    ValidateRunConfig(config);
    const Matrix x = ReadFeatures(features);
    Require(!ks.empty(), "sweep needs at least one k");
    for (int k : ks) {
      if (k < 1 || static_cast<std::size_t>(k) > x.rows())
        throw Error(Errc::kTooFewSamples,
                    "k = " + std::to_string(k) + " invalid for " +
                        std::to_string(x.rows()) + " rows");
    }
    out << "k\tinertia\tmajority\n";
    for (int k : ks) {
      KMeansOptions opts;
      opts.workers = config.workers;
      const auto model = FitKMeans(x, k, config.seed, opts);
      const auto assigned = AssignClusters(model, x, config.workers);
      std::vector<std::uint32_t> labels(assigned.size());
      for (std::size_t i = 0; i < assigned.size(); ++i) labels[i] = assigned[i].label;
      const auto stats = ComputeLabelStatistics(labels, k);
      out << k << '\t' << Num(model.inertia) << '\t' << Num(stats.majority)
          << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

int CmdInspect(const fs::path& path, std::ostream& out, std::ostream& err) {
  try {
    char magic[4] = {};
    {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
      in.read(magic, 4);
    }
    if (std::memcmp(magic, "STEX", 4) == 0) {
      const auto store = ReadFeatureHeader(path);
      out << "format\tSTEX\nrows\t" << store.n_rows << "\ndim\t" << store.dim
          << '\n';
    } else if (std::memcmp(magic, "SLBL", 4) == 0) {
      const auto model = ReadModel(path);
      if (const auto* c = std::get_if<ClusterModel>(&model)) {
        out << "format\tSLBL\nkind\tcluster\nk\t" << c->k() << "\ndim\t"
            << c->dim() << '\n';
      } else {
        const auto& b = std::get<BinaryCodeModel>(model);
        out << "format\tSLBL\nkind\t"
            << (b.kind == ModelKind::kSpectrum ? "spectrum" : "binary")
            << "\nbits\t" << b.n_bits() << "\ndim\t" << b.dim() << '\n';
      }
    } else if (std::memcmp(magic, "CGRM", 4) == 0) {
      const auto m = ReadCochleagramDump(path);
      out << "format\tCGRM\nrows\t" << m.rows() << "\ncols\t" << m.cols() << '\n';
    } else if (std::memcmp(magic, "RIFF", 4) == 0) {
      const auto w = DecodeAudio(path);
      out << "format\tWAV\nsample_rate\t" << w.sample_rate << "\nsamples\t"
          << w.samples.size() << "\nduration_s\t" << Num(w.duration()) << '\n';
    } else {
      throw Error(Errc::kBadMagic, path.string() + ": unrecognized file");
    }
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

int CmdEval(const RunConfig& config, int train_per_family, int test_per_family,
            std::ostream& out, std::ostream& err) {
  try {
    ValidateRunConfig(config);
    const std::vector<SoundFamily> families = {
        SoundFamily::kPureTone, SoundFamily::kWhiteNoise, SoundFamily::kAmNoise};
    const int k = static_cast<int>(families.size());
    const auto train = MakeFamilyCorpus(families, train_per_family, config.seed);
    const auto test = MakeFamilyCorpus(families, test_per_family, config.seed + 1);
    const Matrix train_x = ExtractTextures(train, config.workers);
    const Matrix test_x = ExtractTextures(test, config.workers);
    std::vector<int> train_f, test_f;
    for (const auto& c : train) train_f.push_back(c.family);
    for (const auto& c : test) test_f.push_back(c.family);

    const double purity =
        FamilySeparation(train_x, train_f, k, config.seed, config.workers);
    const double accuracy = NearestCentroidAccuracy(
        train_x, train_f, test_x, test_f, k, config.seed, config.workers);
    const double chance = 1.0 / k;
    out << "metric\tvalue\n"
        << "families\t" << k << '\n'
        << "train_clips\t" << train.size() << '\n'
        << "test_clips\t" << test.size() << '\n'
        << "purity\t" << Num(purity) << '\n'
        << "chance\t" << Num(chance) << '\n'
        << "accuracy\t" << Num(accuracy) << '\n'
        << "accuracy_over_chance\t" << Num(accuracy / chance) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace soundtex
