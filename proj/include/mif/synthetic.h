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

#ifndef MIF_SYNTHETIC_H_
#define MIF_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "mif/frame.h"

namespace mif {

// Texture with a roughly 1/f spectrum plus sharp-edged shapes, in
// [0.05, 0.95]. Stands in for natural image content in tests and demos.
Plane NaturalImage(int width, int height, std::uint64_t seed);

// Bilinear sample with border clamping.
double SampleBilinear(const Plane& p, double x, double y);

struct ClipOptions {
  int width = 128;
  int height = 128;
  int frames = 16;
  // Global motion in luma pixels per frame; drawn from
  // [-max_speed, max_speed] per axis when `random_motion` is set.
  double velocity_x = 1.0;
  double velocity_y = 0.5;
  bool random_motion = true;
  double max_speed = 2.0;
  std::uint64_t seed = 1;
};

// A panning window over a large synthetic canvas.
std::vector<Frame> SyntheticClip(const ClipOptions& options);

}  // namespace mif

#endif  // MIF_SYNTHETIC_H_
