// include/soundtex/commands.hpp

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
#include <iosfwd>
#include <span>
#include <string>

#include "soundtex/audio.hpp"
#include "soundtex/labelspace.hpp"
#include "soundtex/parallel.hpp"

namespace soundtex {

/// Settings shared by the batch commands.
struct RunConfig {
  double window_duration = kDefaultWindowSeconds;
  int k = kDefaultClusters;
  int n_bits = kDefaultBits;
  std::uint64_t seed = 0;
  int workers = DefaultWorkers();
};

void ValidateRunConfig(const RunConfig& config);

/// Exit statuses used by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUnusableInput = 2;

/// Sidecar listing failed manifest entries, next to the feature file.
std::filesystem::path ErrorReportPath(const std::filesystem::path& features);
/// 0/1 retained mask written next to a cluster model.
std::filesystem::path RetainedMaskPath(const std::filesystem::path& model);

// Each command writes results to `out` and diagnostics to `err`, and
// returns the process exit status.

/// One 502-d texture row per manifest entry, in manifest order. Failed
/// entries become zero rows listed in the sidecar report; exit 1 if any
/// entry failed, 2 if the manifest itself is unusable.
int CmdExtract(const std::filesystem::path& manifest,
               const std::filesystem::path& out_features,
               const RunConfig& config, std::ostream& out, std::ostream& err);

/// Same as CmdExtract but each row is the 32-d spectrum snapshot.
int CmdSpectrum(const std::filesystem::path& manifest,
                const std::filesystem::path& out_features,
                const RunConfig& config, std::ostream& out, std::ostream& err);

enum class FitKind { kCluster, kBinary, kSpectrum };
FitKind ParseFitKind(const std::string& name);

int CmdFit(const std::filesystem::path& features, FitKind kind,
           const std::filesystem::path& out_model, const RunConfig& config,
           std::ostream& out, std::ostream& err);

int CmdAssign(const std::filesystem::path& features,
              const std::filesystem::path& model, const RunConfig& config,
              std::ostream& out, std::ostream& err);

int CmdSweepK(const std::filesystem::path& features, std::span<const int> ks,
              const RunConfig& config, std::ostream& out, std::ostream& err);

/// Describes a STEX, SLBL, CGRM or WAV file.
int CmdInspect(const std::filesystem::path& path, std::ostream& out,
               std::ostream& err);

/// Synthetic three-family benchmark; prints a metric<TAB>value table.
int CmdEval(const RunConfig& config, int train_per_family, int test_per_family,
            std::ostream& out, std::ostream& err);

}  // namespace soundtex
