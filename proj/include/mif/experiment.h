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

#ifndef MIF_EXPERIMENT_H_
#define MIF_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mif/filters.h"
#include "mif/frame.h"
#include "mif/proxy_codec.h"
#include "mif/rfs.h"

namespace mif {

inline const std::vector<int> kDefaultQps = {22, 27, 32, 37};

struct SequenceInput {
  std::string name;
  std::vector<Frame> raw;
};

// Models used at one QP.
struct ModelSet {
  MifNet<float> mif;
  IfNet<float> single;
  RfsNetParams rfs;
};

struct ExperimentConfig {
  std::vector<int> qps = kDefaultQps;
  ProxyCodecConfig codec;  // qp_base is overridden per QP
  RfsConfig rfs;
};

struct FrameLog {
  ModeDecision decision;
  int qp = 0;
  long nonzero_coefficients = 0;
};

struct QpRun {
  int qp = 0;
  double bitrate = 0.0;  // proxy: nonzero coefficients per second
  double anchor_psnr = 0.0;
  double enhanced_psnr = 0.0;
  std::vector<FrameLog> frames;

  int CountMode(FilterMode mode) const;
};

struct SequenceReport {
  std::string name;
  std::vector<QpRun> runs;  // in config.qps order
  double bd_rate = 0.0;     // percent, enhanced vs anchor
  double bd_psnr = 0.0;     // dB
};

struct ExperimentReport {
  std::vector<SequenceReport> sequences;
};

// Encodes each sequence at every QP, enhances it in loop (enhanced frames
// feed the reference pool of later frames) and compares against the
// unfiltered anchor.
ExperimentReport RunExperiment(
    const std::vector<SequenceInput>& sequences,
    const std::function<const ModelSet&(int qp)>& models_for_qp,
    const ExperimentConfig& config);

// Writes rd_points.csv, bd_summary.csv and one decisions_<seq>_qp<QP>.csv
// per run into `dir`.
void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir);

struct ModelPaths {
  std::filesystem::path mif;
  std::filesystem::path single;
  std::filesystem::path rfs;
};

// JSON manifest. Relative paths resolve against the manifest directory.
//   {"sequences": [{"name", "path", "width", "height", "bit_depth",
//                   "frames"} | {"name", "synthetic": {...}}],
//    "qps": [...], "models": {"default"|"<qp>": {"mif","if","rfs"}},
//    "output_dir": "...", "seed": 1,
//    "codec": {"gop_size", "qp_offsets", "fps", "split_variance"},
//    "rfs": {"pool_size", "cc_threshold", "num_selected"}}
struct ExperimentManifest {
  struct Sequence {
    std::string name;
    std::optional<std::filesystem::path> path;
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::optional<int> frames;
    std::optional<nlohmann::json> synthetic;
  };
  std::vector<Sequence> sequences;
  std::vector<int> qps = kDefaultQps;
  std::map<std::string, ModelPaths> models;  // key "default" or QP
  std::filesystem::path output_dir;
  std::uint64_t seed = 1;
  ExperimentConfig config;

  static ExperimentManifest Parse(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir);
  static ExperimentManifest Load(const std::filesystem::path& path);
  const ModelPaths& ModelsFor(int qp) const;
  // Every referenced file must exist.
  void CheckInputs() const;
};

std::vector<Frame> LoadManifestSequence(
    const ExperimentManifest::Sequence& seq);

// Runs a manifest end to end and writes the report.
ExperimentReport RunExperimentManifest(const ExperimentManifest& manifest);

}  // namespace mif

#endif  // MIF_EXPERIMENT_H_
