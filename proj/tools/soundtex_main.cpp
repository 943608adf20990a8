// tools/soundtex_main.cpp

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

// soundtex: sound-texture features and pseudo-label spaces for audio corpora.
//
//   soundtex extract  --manifest m.jsonl --out feats.stex
//   soundtex spectrum --manifest m.jsonl --out snaps.stex
//   soundtex fit --kind cluster|binary|spectrum --features f.stex --out m.slbl
//   soundtex assign --features f.stex --model m.slbl
//   soundtex sweep-k --features f.stex --k 2 --k 30
//   soundtex inspect <file>
//   soundtex eval

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "soundtex/commands.hpp"
#include "soundtex/error.hpp"

int main(int argc, char** argv) {
  using namespace soundtex;

  CLI::App app{"Sound-texture features and self-supervised label spaces"};
  app.require_subcommand(1);

  RunConfig config;
  std::string manifest, features, model, out, kind = "cluster", target;
  std::vector<int> k_list;
  int train_per_family = 100, test_per_family = 50;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--workers", config.workers,
                    "Worker threads (SOUNDTEX_WORKERS overrides)")
        ->check(CLI::PositiveNumber);
  };

  auto* extract = app.add_subcommand("extract", "Compute 502-d textures for a manifest");
  extract->add_option("--manifest", manifest, "JSON-lines manifest")->required();
  extract->add_option("--out", out, "Output STEX feature file")->required();
  extract->add_option("--window-s", config.window_duration, "Window length in seconds")
      ->capture_default_str();
  add_common(extract);

  auto* spectrum = app.add_subcommand("spectrum", "Compute 32-d spectrum snapshots for a manifest");
  spectrum->add_option("--manifest", manifest, "JSON-lines manifest")->required();
  spectrum->add_option("--out", out, "Output STEX feature file")->required();
  spectrum->add_option("--window-s", config.window_duration, "Window length in seconds")
      ->capture_default_str();
  add_common(spectrum);

  auto* fit = app.add_subcommand("fit", "Fit a label model");
  fit->add_option("--kind", kind, "cluster, binary or spectrum")
      ->check(CLI::IsMember({"cluster", "binary", "spectrum"}))
      ->capture_default_str();
  fit->add_option("--features", features, "Input STEX feature file")->required();
  fit->add_option("--out", out, "Output SLBL model file")->required();
  fit->add_option("--k", config.k, "Number of clusters")->capture_default_str();
  fit->add_option("--bits", config.n_bits, "Number of code bits")->capture_default_str();
  add_common(fit);

  auto* assign = app.add_subcommand("assign", "Label feature rows with a model");
  assign->add_option("--features", features, "Input STEX feature file")->required();
  assign->add_option("--model", model, "SLBL model file")->required();
  add_common(assign);

  auto* sweep = app.add_subcommand("sweep-k", "Fit k-means for several k");
  sweep->add_option("--features", features, "Input STEX feature file")->required();
  sweep->add_option("--k", k_list, "Cluster counts (repeatable)")->required();
  add_common(sweep);

  auto* inspect = app.add_subcommand("inspect", "Describe a STEX/SLBL/CGRM/WAV file");
  inspect->add_option("file", target, "File to describe")->required();

  auto* eval = app.add_subcommand("eval", "Synthetic three-family label-quality benchmark");
  eval->add_option("--train", train_per_family, "Training clips per family")
      ->capture_default_str();
  eval->add_option("--test", test_per_family, "Test clips per family")
      ->capture_default_str();
  add_common(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUnusableInput;
  }

  if (const char* env = std::getenv("SOUNDTEX_WORKERS")) {
    try {
      config.workers = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "SOUNDTEX_WORKERS must be an integer\n";
      return kExitUnusableInput;
    }
  }

  try {
    if (*extract) return CmdExtract(manifest, out, config, std::cout, std::cerr);
    if (*spectrum) return CmdSpectrum(manifest, out, config, std::cout, std::cerr);
    if (*fit)
      return CmdFit(features, ParseFitKind(kind), out, config, std::cout, std::cerr);
    if (*assign) return CmdAssign(features, model, config, std::cout, std::cerr);
    if (*sweep) return CmdSweepK(features, k_list, config, std::cout, std::cerr);
    if (*inspect) return CmdInspect(target, std::cout, std::cerr);
    if (*eval)
      return CmdEval(config, train_per_family, test_per_family, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::kInvalidArgument ? kExitUnusableInput : kExitFailure;
  }
  return kExitFailure;
}
