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

#ifndef MIF_PARTITION_H_
#define MIF_PARTITION_H_

#include <filesystem>
#include <vector>

#include "mif/frame.h"

namespace mif {

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// CU and TU rectangles of one frame. Each level tiles the frame on its own.
struct BlockLayout {
  std::vector<Rect> cu;
  std::vector<Rect> tu;

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

// Per-pixel boundary maps: +1 on a block perimeter, -1 inside a block.
struct PartitionMaps {
  Plane cu;
  Plane tu;
};

// Throws ValidationError naming the first gap or overlap when `rects` do not
// tile width x height exactly, or when a side is not a power of two in
// [4, 64].
void ValidateTiling(const std::vector<Rect>& rects, int width, int height);

// A pixel is +1 iff it lies on the perimeter of the rectangle containing it.
// Internal edges are therefore two pixels wide across adjacent blocks, and
// the frame border is always a boundary.
PartitionMaps RasterizePartition(const BlockLayout& layout, int width,
                                 int height);

// Sidecar: JSON array indexed by frame, entries {"cu": [[x,y,w,h],...],
// "tu": [...]}.
std::vector<BlockLayout> ReadPartitionSidecar(
    const std::filesystem::path& path);
void WritePartitionSidecar(const std::filesystem::path& path,
                           const std::vector<BlockLayout>& layouts);

}  // namespace mif

#endif  // MIF_PARTITION_H_
