// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Failures print one line
//   error: <category>: <message>
// to stderr and exit with status 2.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mif/bjontegaard.h"
#include "mif/dataset.h"
#include "mif/error.h"
#include "mif/experiment.h"
#include "mif/filters.h"
#include "mif/metrics.h"
#include "mif/model_bundle.h"
#include "mif/partition.h"
#include "mif/proxy_codec.h"
#include "mif/synthetic.h"
#include "mif/training.h"
#include "mif/yuv_io.h"

namespace mif {
namespace {

namespace fs = std::filesystem;

struct SimulateArgs {
  fs::path raw;
  fs::path urf;
  fs::path partitions;
  std::optional<fs::path> stats;
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int qp = 37;
  int gop_size = 4;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> synthetic_seed;
  int synthetic_frames = 16;
};

void Simulate(const SimulateArgs& a) {
  std::vector<Frame> raw;
  if (a.synthetic_seed) {
    ClipOptions co;
    co.width = a.width;
    co.height = a.height;
    co.frames = a.synthetic_frames;
    co.seed = *a.synthetic_seed;
    raw = SyntheticClip(co);
    WriteYuvSequence(a.raw, raw, a.bit_depth);
  } else {
    raw = ReadYuvSequence(a.raw, a.width, a.height, a.bit_depth);
  }
  ProxyCodecConfig codec;
  codec.qp_base = a.qp;
  codec.gop_size = a.gop_size;
  codec.seed = a.seed;
  const ProxyEncodeResult coded = ProxyEncode(raw, codec);
  WriteYuvSequence(a.urf, coded.urfs, a.bit_depth);
  WritePartitionSidecar(a.partitions, coded.layouts);
  double psnr = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i)
    psnr += Psnr(coded.urfs[i].y, raw[i].y);
  psnr /= static_cast<double>(raw.size());
  if (a.stats) {
    std::ofstream out(*a.stats);
    out << "frame_index,qp,nonzero_coefficients,psnr_y\n";
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out << i << ',' << coded.stats[i].qp << ','
          << coded.stats[i].nonzero_coefficients << ','
          << Psnr(coded.urfs[i].y, raw[i].y) << '\n';
    }
    if (!out) throw IoError("failed writing " + a.stats->string());
  }
  std::cout << raw.size() << " frames, bitrate " << coded.bitrate
            << ", mean luma PSNR " << psnr << " dB\n";
}

struct TrainArgs {
  fs::path config;
  fs::path dataset;
  fs::path output;
  std::optional<fs::path> log;
  std::optional<fs::path> rfs_model;
};

void TrainRfsCommand(const TrainArgs& a) {
  const TrainConfig config = LoadTrainConfig(a.config);
  const auto groups =
      BuildRfsGroups(LoadCodedSequences(a.dataset), RfsConfig{});
  if (groups.empty()) throw ValidationError("train-rfs: no usable RFS groups");
  const RfsTrainResult r = TrainRfs(groups, config);
  r.bundle.Save(a.output);
  if (a.log) {
    std::ofstream out(*a.log);
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < r.losses.size(); ++i) {
      out << i + 1 << ',' << r.losses[i] << '\n';
    }
  }
  std::cout << "trained on " << groups.size() << " groups, ranking agreement "
            << RankingAgreement(r.params, groups) << '\n';
}

void TrainIfCommand(const TrainArgs& a) {
  const TrainConfig config = LoadTrainConfig(a.config);
  const auto patches = BuildIfPatches(LoadCodedSequences(a.dataset),
                                      {config.patch_size, config.patch_stride});
  const IfTrainResult r = TrainIf(patches, config);
  r.bundle.Save(a.output);
  if (a.log) r.log.WriteCsv(*a.log);
  std::cout << "trained on " << patches.size() << " patches\n";
}

void TrainMifCommand(const TrainArgs& a) {
  const TrainConfig config = LoadTrainConfig(a.config);
  std::optional<RfsNetParams> rfs;
  if (a.rfs_model) rfs = LoadRfsParams(ModelBundle::Load(*a.rfs_model));
  const auto patches = BuildMifPatches(
      LoadCodedSequences(a.dataset), RfsConfig{},
      rfs ? ReferenceSource::kRfsNet : ReferenceSource::kGroundTruth,
      rfs ? &*rfs : nullptr, {config.patch_size, config.patch_stride});
  const MifTrainResult r = TrainMif(patches, config);
  r.bundle.Save(a.output);
  if (a.log) r.log.WriteCsv(*a.log);
  std::cout << "trained on " << patches.size() << " patches";
  if (r.log.phase_switch)
    std::cout << ", phase switch at " << *r.log.phase_switch;
  std::cout << '\n';
}

struct EnhanceArgs {
  fs::path urf;
  fs::path partitions;
  std::optional<fs::path> raw;
  std::optional<fs::path> replay;
  fs::path mif;
  fs::path single;
  fs::path rfs;
  fs::path output;
  std::optional<fs::path> decisions;
  int width = 0;
  int height = 0;
  int bit_depth = 8;
};

void Enhance(const EnhanceArgs& a) {
  if (a.raw.has_value() == a.replay.has_value()) {
    throw ConfigError("enhance: give exactly one of --raw or --replay");
  }
  const auto urfs =
      ReadYuvSequence(a.urf, a.width, a.height, a.bit_depth, FrameRole::kUrf);
  const auto layouts = ReadPartitionSidecar(a.partitions);
  if (layouts.size() != urfs.size()) {
    throw ValidationError("enhance: " + std::to_string(urfs.size()) +
                          " frames but " + std::to_string(layouts.size()) +
                          " partition entries");
  }
  const MifNet<float> mif = LoadMifNet(ModelBundle::Load(a.mif));
  const IfNet<float> single = LoadIfNet(ModelBundle::Load(a.single));
  const CandidateFilters filters = MakeCandidateFilters(mif, single);
  const RfsConfig rfs_config;

  std::vector<Frame> raws;
  std::vector<ModeDecision> decisions;
  if (a.raw) {
    raws = ReadYuvSequence(*a.raw, a.width, a.height, a.bit_depth);
  } else {
    decisions = ReadDecisionsCsv(*a.replay);
    if (decisions.size() != urfs.size()) {
      throw ValidationError("enhance: decisions cover " +
                            std::to_string(decisions.size()) + " of " +
                            std::to_string(urfs.size()) + " frames");
    }
  }
  const RfsNetParams rfs =
      a.raw ? LoadRfsParams(ModelBundle::Load(a.rfs)) : RfsNetParams{};

  std::vector<Frame> enhanced;
  std::map<FilterMode, int> counts;
  for (std::size_t n = 0; n < urfs.size(); ++n) {
    const PartitionMaps maps =
        RasterizePartition(layouts[n], a.width, a.height);
    const std::size_t first = n > static_cast<std::size_t>(rfs_config.pool_size)
                                  ? n - rfs_config.pool_size
                                  : 0;
    const auto pool = std::span<const Frame>(enhanced).subspan(first);
    Frame out;
    if (a.raw) {
      EnhanceResult r =
          EnhanceFrame(urfs[n], maps, pool, raws, filters, rfs, rfs_config);
      out = std::move(r.enhanced);
      decisions.push_back(r.decision);
    } else {
      out = ReplayFrame(urfs[n], maps, pool, decisions[n], filters);
    }
    ++counts[decisions[n].mode];
    out.role = FrameRole::kEnhanced;
    enhanced.push_back(std::move(out));
  }
  WriteYuvSequence(a.output, enhanced, a.bit_depth);
  if (a.decisions) WriteDecisionsCsv(*a.decisions, decisions);
  std::cout << enhanced.size() << " frames:";
  for (const auto& [mode, count] : counts)
    std::cout << ' ' << ModeName(mode) << ' ' << count;
  std::cout << '\n';
}

struct EvaluateArgs {
  fs::path rd;
  std::string anchor;
  std::optional<fs::path> output;
};

void Evaluate(const EvaluateArgs& a) {
  const auto curves = ReadRdCsv(a.rd);
  const auto anchor = curves.find(a.anchor);
  if (anchor == curves.end()) {
    throw ConfigError("evaluate: no curve labelled '" + a.anchor + "' in " +
                      a.rd.string());
  }
  std::ostringstream csv;
  csv << "label,bd_rate_percent,bd_psnr_db\n";
  for (const auto& [label, curve] : curves) {
    if (label == a.anchor) continue;
    const double rate = BdRate(anchor->second, curve);
    const double psnr = BdPsnr(anchor->second, curve);
    csv << label << ',' << rate << ',' << psnr << '\n';
    std::cout << label << " vs " << a.anchor << ": BD-BR " << rate
              << " %, BD-PSNR " << psnr << " dB\n";
  }
  if (a.output) {
    std::ofstream out(*a.output);
    out << csv.str();
    if (!out) throw IoError("failed writing " + a.output->string());
  }
}

void RunExperimentCommand(const fs::path& manifest_path) {
  const ExperimentManifest manifest = ExperimentManifest::Load(manifest_path);
  const ExperimentReport report = RunExperimentManifest(manifest);
  for (const SequenceReport& s : report.sequences) {
    std::cout << s.name << ": BD-BR " << s.bd_rate << " %, BD-PSNR "
              << s.bd_psnr << " dB\n";
  }
  std::cout << "report written to " << manifest.output_dir.string() << '\n';
}

int Fail(const char* category, const std::string& message) {
  std::cerr << "error: " << category << ": " << message << '\n';
  return 2;
}

int Main(int argc, char** argv) {
  CLI::App app("Multi-frame in-loop filter toolkit", "mif");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Code a raw sequence with the proxy codec");
  simulate->add_option("--raw", sim.raw, "Raw YUV 4:2:0 input")->required();
  simulate->add_option("--urf", sim.urf, "Reconstruction output")->required();
  simulate
      ->add_option("--partitions", sim.partitions, "Partition sidecar output")
      ->required();
  simulate->add_option("--width", sim.width)->required();
  simulate->add_option("--height", sim.height)->required();
  simulate->add_option("--bit-depth", sim.bit_depth);
  simulate->add_option("--qp", sim.qp);
  simulate->add_option("--gop-size", sim.gop_size);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--stats", sim.stats, "Per-frame CSV output");
  simulate->add_option("--synthetic-seed", sim.synthetic_seed,
                       "Generate a synthetic clip and write it to --raw");
  simulate->add_option("--synthetic-frames", sim.synthetic_frames);

  TrainArgs train;
  std::vector<CLI::App*> trainers;
  for (const auto& [name, help] :
       {std::pair{"train-rfs", "Train the reference ranking network"},
        std::pair{"train-if", "Train the single-frame network"},
        std::pair{"train-mif", "Train the multi-frame network"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", train.config, "key=value training config")
        ->required();
    sub->add_option("--dataset", train.dataset, "Dataset manifest (JSON)")
        ->required();
    sub->add_option("--output", train.output, "Model bundle output")
        ->required();
    sub->add_option("--log", train.log, "Training log CSV");
    trainers.push_back(sub);
  }
  trainers[2]->add_option("--rfs-model", train.rfs_model,
                          "Pick references with a trained RFS bundle");

  EnhanceArgs enh;
  auto* enhance =
      app.add_subcommand("enhance", "Filter a coded sequence in loop");
  enhance->add_option("--urf", enh.urf)->required();
  enhance->add_option("--partitions", enh.partitions)->required();
  enhance->add_option("--raw", enh.raw,
                      "Raw sequence for encoder-side selection");
  enhance->add_option("--replay", enh.replay, "Recorded decisions CSV");
  enhance->add_option("--mif", enh.mif)->required();
  enhance->add_option("--if", enh.single)->required();
  enhance->add_option("--rfs", enh.rfs);
  enhance->add_option("--output", enh.output)->required();
  enhance->add_option("--decisions", enh.decisions, "Decisions CSV output");
  enhance->add_option("--width", enh.width)->required();
  enhance->add_option("--height", enh.height)->required();
  enhance->add_option("--bit-depth", enh.bit_depth);

  EvaluateArgs eval;
  auto* evaluate =
      app.add_subcommand("evaluate", "Bjontegaard deltas of RD curves");
  evaluate->add_option("--rd", eval.rd, "CSV of label,bitrate,psnr")
      ->required();
  evaluate->add_option("--anchor", eval.anchor, "Anchor label")->required();
  evaluate->add_option("--output", eval.output, "BD table CSV output");

  fs::path manifest;
  auto* run =
      app.add_subcommand("run-experiment", "Run a JSON experiment manifest");
  run->add_option("--manifest", manifest)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail("config", e.what());
  }

  try {
    if (*simulate) Simulate(sim);
    if (*trainers[0]) TrainRfsCommand(train);
    if (*trainers[1]) TrainIfCommand(train);
    if (*trainers[2]) TrainMifCommand(train);
    if (*enhance) Enhance(enh);
    if (*evaluate) Evaluate(eval);
    if (*run) RunExperimentCommand(manifest);
  } catch (const Error& e) {
    return Fail(CategoryName(e.category()), e.what());
  } catch (const std::exception& e) {
    return Fail("computation", e.what());
  }
  return 0;
}

}  // namespace
}  // namespace mif

int main(int argc, char** argv) { return mif::Main(argc, argv); }
