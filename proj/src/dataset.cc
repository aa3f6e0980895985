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

#include "mif/dataset.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <span>

#include "json.hpp"
#include "mif/error.h"
#include "mif/yuv_io.h"

namespace mif {
namespace {

std::span<const Frame> PoolOf(const CodedSequence& seq, std::size_t n,
                              const RfsConfig& config) {
  const std::size_t begin =
      n > static_cast<std::size_t>(config.pool_size) ? n - config.pool_size : 0;
  return std::span<const Frame>(seq.urf).subspan(begin, n - begin);
}

}  // namespace

void CodedSequence::Validate() const {
  if (raw.size() != urf.size() || raw.size() != maps.size()) {
    throw ValidationError("coded sequence: raw/urf/partition counts differ");
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].y.SameShape(urf[i].y) || !maps[i].cu.SameShape(urf[i].y)) {
      throw ValidationError("coded sequence: frame " + std::to_string(i) +
                            " planes are not aligned");
    }
  }
}

std::vector<RfsGroup> BuildRfsGroups(const std::vector<CodedSequence>& seqs,
                                     const RfsConfig& config, int min_valid) {
  std::vector<RfsGroup> groups;
  for (const CodedSequence& seq : seqs) {
    seq.Validate();
    for (std::size_t n = 1; n < seq.urf.size(); ++n) {
      const auto records = ComputeRfsMetrics(seq.urf[n], PoolOf(seq, n, config),
                                             seq.raw, config);
      RfsGroup group;
      for (const RfsRecord& r : records) {
        if (!r.valid) continue;
        group.features.push_back(r.Features());
        group.potential.push_back(GroundTruthPotential(
            RawAt(seq.urf, r.pool_index), seq.urf[n], seq.raw[n]));
        group.pool_indices.push_back(r.pool_index);
      }
      if (static_cast<int>(group.features.size()) >= min_valid) {
        groups.push_back(std::move(group));
      }
    }
  }
  return groups;
}

std::vector<PatchSample> BuildMifPatches(const std::vector<CodedSequence>& seqs,
                                         const RfsConfig& config,
                                         ReferenceSource source,
                                         const RfsNetParams* rfs_params,
                                         const PatchOptions& options) {
  if (source == ReferenceSource::kRfsNet && !rfs_params) {
    throw ValidationError("mif patches: RFS-Net selection needs parameters");
  }
  std::vector<PatchSample> samples;
  for (const CodedSequence& seq : seqs) {
    seq.Validate();
    for (std::size_t n = 1; n < seq.urf.size(); ++n) {
      const auto records = ComputeRfsMetrics(seq.urf[n], PoolOf(seq, n, config),
                                             seq.raw, config);
      std::optional<std::vector<int>> chosen;
      if (source == ReferenceSource::kRfsNet) {
        chosen = SelectReferences(records, *rfs_params, config);
      } else {
        std::vector<std::pair<int, double>> scored;
        for (const RfsRecord& r : records) {
          if (!r.valid) continue;
          scored.emplace_back(r.pool_index,
                              GroundTruthPotential(RawAt(seq.urf, r.pool_index),
                                                   seq.urf[n], seq.raw[n]));
        }
        if (static_cast<int>(scored.size()) >= config.num_selected) {
          chosen = RankByScore(std::move(scored), config.num_selected);
        }
      }
      if (!chosen) continue;
      AlignedFrameSet set;
      set.raw = &seq.raw[n].y;
      set.urf = &seq.urf[n].y;
      set.maps = &seq.maps[n];
      for (int idx : *chosen) set.refs.push_back(&RawAt(seq.urf, idx).y);
      auto patches = ExtractPatches(set, options.stride, options.patch_size);
      for (auto& p : patches) samples.push_back(std::move(p));
    }
  }
  return samples;
}

std::vector<PatchSample> BuildIfPatches(const std::vector<CodedSequence>& seqs,
                                        const PatchOptions& options) {
  std::vector<PatchSample> samples;
  for (const CodedSequence& seq : seqs) {
    seq.Validate();
    for (std::size_t n = 0; n < seq.urf.size(); ++n) {
      AlignedFrameSet set;
      set.raw = &seq.raw[n].y;
      set.urf = &seq.urf[n].y;
      set.maps = &seq.maps[n];
      auto patches = ExtractPatches(set, options.stride, options.patch_size);
      for (auto& p : patches) samples.push_back(std::move(p));
    }
  }
  return samples;
}

std::vector<CodedSequence> LoadCodedSequences(
    const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open dataset manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("dataset manifest " + manifest.string() + ": " +
                      e.what());
  }
  const std::filesystem::path base = manifest.parent_path();
  auto path = [&](const nlohmann::json& s, const char* key) {
    if (!s.contains(key) || !s.at(key).is_string()) {
      throw ConfigError(std::string("dataset sequence: missing '") + key + "'");
    }
    const std::filesystem::path p = s.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  if (!j.is_object() || !j.contains("sequences") ||
      !j.at("sequences").is_array()) {
    throw ConfigError("dataset manifest: missing 'sequences' array");
  }
  std::vector<CodedSequence> seqs;
  for (const auto& s : j.at("sequences")) {
    if (!s.contains("width") || !s.contains("height")) {
      throw ConfigError("dataset sequence: missing 'width' or 'height'");
    }
    const int w = s.at("width").get<int>();
    const int h = s.at("height").get<int>();
    const int depth = s.value("bit_depth", 8);
    CodedSequence seq;
    seq.raw = ReadYuvSequence(path(s, "raw"), w, h, depth, FrameRole::kRaw);
    seq.urf = ReadYuvSequence(path(s, "urf"), w, h, depth, FrameRole::kUrf);
    for (const BlockLayout& layout :
         ReadPartitionSidecar(path(s, "partitions"))) {
      seq.maps.push_back(RasterizePartition(layout, w, h));
    }
    seq.Validate();
    seqs.push_back(std::move(seq));
  }
  if (seqs.empty()) throw ConfigError("dataset manifest: no sequences");
  return seqs;
}

std::vector<RfsGroup> SyntheticRankingGroups(int groups, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dpsnr(0.0, 3.0);
  std::uniform_real_distribution<double> cc(0.3, 1.0);
  std::uniform_int_distribution<int> size(4, 16);
  constexpr std::array<double, kRfsFeatures> kWeights = {1.0, 0.3, 0.3,
                                                         2.0, 0.5, 0.5};
  std::vector<RfsGroup> out;
  for (int gi = 0; gi < groups; ++gi) {
    RfsGroup g;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      std::array<double, kRfsFeatures> f{};
      for (int c = 0; c < 3; ++c) f[c] = dpsnr(rng);
      for (int c = 3; c < 6; ++c) f[c] = cc(rng);
      double score = 0.0;
      for (int k = 0; k < kRfsFeatures; ++k) score += kWeights[k] * f[k];
      g.features.push_back(f);
      g.potential.push_back(30.0 + 2.0 * std::tanh(score - 3.0));
      g.pool_indices.push_back(i);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace mif
