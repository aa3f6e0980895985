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

#include "mif/patches.h"

#include "mif/error.h"

namespace mif {

std::vector<PatchSample> ExtractPatches(const AlignedFrameSet& frames,
                                        int stride, int patch_size) {
  if (stride < 1) throw ValidationError("patch stride must be >= 1");
  if (patch_size < 1) throw ValidationError("patch size must be >= 1");
  if (!frames.raw || !frames.urf || !frames.maps) {
    throw ValidationError("patch extraction needs raw, urf and maps");
  }
  const Plane& raw = *frames.raw;
  auto check = [&](const Plane& p, const char* what) {
    if (!p.SameShape(raw)) {
      throw ValidationError(std::string("resolution mismatch: ") + what +
                            " differs from raw");
    }
  };
  check(*frames.urf, "urf");
  check(frames.maps->cu, "cu map");
  check(frames.maps->tu, "tu map");
  for (const Plane* r : frames.refs) check(*r, "reference");

  std::vector<PatchSample> out;
  for (int y = 0; y + patch_size <= raw.height(); y += stride) {
    for (int x = 0; x + patch_size <= raw.width(); x += stride) {
      PatchSample s;
      s.x = x;
      s.y = y;
      s.raw = raw.Crop(x, y, patch_size, patch_size);
      s.urf = frames.urf->Crop(x, y, patch_size, patch_size);
      s.cu = frames.maps->cu.Crop(x, y, patch_size, patch_size);
      s.tu = frames.maps->tu.Crop(x, y, patch_size, patch_size);
      for (const Plane* r : frames.refs) {
        s.refs.push_back(r->Crop(x, y, patch_size, patch_size));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace mif
