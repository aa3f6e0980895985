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

#ifndef MIF_BLOCK_MATCHING_H_
#define MIF_BLOCK_MATCHING_H_

#include "mif/frame.h"

namespace mif {

struct MotionField {
  Plane mx;  // horizontal displacement in pixels, positive = rightward
  Plane my;  // vertical displacement in pixels, positive = downward
};

struct BlockMatchOptions {
  int block_size = 16;
  int search_range = 8;
};

// Full-search integer block matching with SAD cost. For each block of
// `target` the displacement d minimizing sum |source(p + d) - target(p)| is
// found; ties go to the smaller |dx| + |dy|, then to scan order. Source
// positions outside the frame are clamped to the border.
MotionField BlockMatch(const Plane& source, const Plane& target,
                       const BlockMatchOptions& options = {});

// out(x, y) = Bil{source(x + mx, y + my)} with border clamping.
Plane WarpPlane(const Plane& source, const MotionField& motion);

// Warps `source` toward `target` with BlockMatch.
Plane CompensateByBlockMatching(const Plane& source, const Plane& target,
                                const BlockMatchOptions& options = {});

}  // namespace mif

#endif  // MIF_BLOCK_MATCHING_H_
