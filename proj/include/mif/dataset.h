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

#ifndef MIF_DATASET_H_
#define MIF_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mif/frame.h"
#include "mif/partition.h"
#include "mif/patches.h"
#include "mif/rfs.h"

namespace mif {

// A raw sequence together with its coded reconstruction and partitions.
struct CodedSequence {
  std::vector<Frame> raw;
  std::vector<Frame> urf;
  std::vector<PartitionMaps> maps;

  void Validate() const;
};

// One RFS training group: every valid pool frame of one URF.
struct RfsGroup {
  std::vector<std::array<double, kRfsFeatures>> features;
  std::vector<double> potential;  // block-matching ground truth
  std::vector<int> pool_indices;
};

// RFS groups for every URF with at least `min_valid` valid pool frames. The
// pool of frame n holds the previous (up to N) coded frames.
std::vector<RfsGroup> BuildRfsGroups(const std::vector<CodedSequence>& seqs,
                                     const RfsConfig& config,
                                     int min_valid = 2);

// How MIF training patches pick their references.
enum class ReferenceSource {
  kGroundTruth,  // top-M valid pool frames by block-matching potential
  kRfsNet,       // top-M by the trained RFS-Net
};

struct PatchOptions {
  int patch_size = kPatchSize;
  int stride = kPatchSize;
};

// Luma patches with M co-located reference patches. Frames with fewer than
// M valid pool frames contribute nothing.
std::vector<PatchSample> BuildMifPatches(const std::vector<CodedSequence>& seqs,
                                         const RfsConfig& config,
                                         ReferenceSource source,
                                         const RfsNetParams* rfs_params,
                                         const PatchOptions& options);

// Luma patches without references.
std::vector<PatchSample> BuildIfPatches(const std::vector<CodedSequence>& seqs,
                                        const PatchOptions& options);

// Dataset manifest (JSON), paths relative to the manifest directory:
//   {"sequences": [{"raw": "a.yuv", "urf": "a_urf.yuv",
//                   "partitions": "a_part.json", "width": 128,
//                   "height": 128, "bit_depth": 8}]}
std::vector<CodedSequence> LoadCodedSequences(
    const std::filesystem::path& manifest);

// Synthetic ranking problem: groups of random six-vectors whose potential is
// a fixed monotone function of a hidden linear score.
std::vector<RfsGroup> SyntheticRankingGroups(int groups, std::uint64_t seed);

}  // namespace mif

#endif  // MIF_DATASET_H_
