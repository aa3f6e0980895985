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

#ifndef MIF_YUV_IO_H_
#define MIF_YUV_IO_H_

#include <filesystem>
#include <vector>

#include "mif/frame.h"

namespace mif {

// Bytes occupied by one planar 4:2:0 frame on disk.
std::size_t YuvFrameBytes(int width, int height, int bit_depth);

// Reads a headerless planar 4:2:0 sequence. Samples are normalized to [0,1]
// by dividing by 2^bit_depth - 1. 10-bit input is little-endian 16-bit words.
std::vector<Frame> ReadYuvSequence(const std::filesystem::path& path, int width,
                                   int height, int bit_depth,
                                   FrameRole role = FrameRole::kRaw);

// Inverse of ReadYuvSequence. Samples are clipped to [0,1] and rounded to
// the nearest code value.
void WriteYuvSequence(const std::filesystem::path& path,
                      const std::vector<Frame>& frames, int bit_depth);

// Rounds every sample to the nearest code value of the given bit depth.
Plane QuantizeToBitDepth(const Plane& plane, int bit_depth);

}  // namespace mif

#endif  // MIF_YUV_IO_H_
