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

#ifndef MIF_PATCHES_H_
#define MIF_PATCHES_H_

#include <vector>

#include "mif/frame.h"
#include "mif/partition.h"

namespace mif {

inline constexpr int kPatchSize = 64;

// Co-located luma training patches.
struct PatchSample {
  Plane raw;
  Plane urf;
  Plane cu;
  Plane tu;
  std::vector<Plane> refs;  // empty for single-frame samples
  int x = 0;
  int y = 0;
};

// Spatially aligned luma planes of one coded frame.
struct AlignedFrameSet {
  const Plane* raw = nullptr;
  const Plane* urf = nullptr;
  const PartitionMaps* maps = nullptr;
  std::vector<const Plane*> refs;
};

// Cuts patch_size x patch_size samples on a regular grid with the given
// stride. Positions without full support are discarded.
std::vector<PatchSample> ExtractPatches(const AlignedFrameSet& frames,
                                        int stride,
                                        int patch_size = kPatchSize);

}  // namespace mif

#endif  // MIF_PATCHES_H_
