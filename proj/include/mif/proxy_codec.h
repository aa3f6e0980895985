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

#ifndef MIF_PROXY_CODEC_H_
#define MIF_PROXY_CODEC_H_

#include <cstdint>
#include <vector>

#include "mif/dataset.h"
#include "mif/frame.h"
#include "mif/partition.h"

namespace mif {

// Intra-only transform coder standing in for a full video encoder. It
// produces quality that fluctuates with a hierarchical QP pattern, a block
// partition per frame, and a rate proxy.
struct ProxyCodecConfig {
  int qp_base = 37;
  int gop_size = 4;
  std::vector<int> qp_offsets = {0, 4, 3, 4};
  int transform_size = 8;  // luma; chroma uses half
  double fps = 30.0;
  std::uint64_t seed = 1;
  // Variance at which a quadtree node splits with probability 1/2.
  double split_variance = 0.002;

  void Validate() const;
  int QpForFrame(int frame) const;
};

// Quantizer step for coefficients of [0,1] samples.
double QuantStep(int qp);

struct ProxyFrameStats {
  int qp = 0;
  long nonzero_coefficients = 0;
};

struct ProxyEncodeResult {
  std::vector<Frame> urfs;
  std::vector<BlockLayout> layouts;
  std::vector<PartitionMaps> maps;
  std::vector<ProxyFrameStats> stats;
  double bitrate = 0.0;  // nonzero coefficients per second

  CodedSequence ToCodedSequence(const std::vector<Frame>& raw) const;
};

// Variance-driven random quadtree over 64x64 tree units down to 8x8; the TU
// layout splits every CU once more.
BlockLayout QuadtreeLayout(const Plane& luma, std::uint64_t seed,
                           double split_variance);

// Transform-quantizes one plane in n x n blocks. Returns the reconstruction
// rounded to 8-bit levels; `nonzero` accumulates the coefficient count.
Plane QuantizePlane(const Plane& plane, int n, double step, long& nonzero);

ProxyEncodeResult ProxyEncode(const std::vector<Frame>& raw,
                              const ProxyCodecConfig& config);

}  // namespace mif

#endif  // MIF_PROXY_CODEC_H_
