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

#include "mif/block_matching.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "mif/error.h"

namespace mif {
namespace {

double ClampedAt(const Plane& p, int x, int y) {
  return p.at(std::clamp(x, 0, p.width() - 1),
              std::clamp(y, 0, p.height() - 1));
}

}  // namespace

MotionField BlockMatch(const Plane& source, const Plane& target,
                       const BlockMatchOptions& options) {
  if (!source.SameShape(target)) {
    throw ValidationError("block matching: shape mismatch");
  }
  if (options.block_size < 1 || options.search_range < 0) {
    throw ConfigError("block matching: invalid block size or range");
  }
  const int w = target.width();
  const int h = target.height();
  const int bs = options.block_size;
  const int r = options.search_range;
  MotionField field{Plane(w, h), Plane(w, h)};
  for (int by = 0; by < h; by += bs) {
    for (int bx = 0; bx < w; bx += bs) {
      const int bw = std::min(bs, w - bx);
      const int bh = std::min(bs, h - by);
      double best = std::numeric_limits<double>::infinity();
      int best_dx = 0, best_dy = 0, best_norm = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          double sad = 0.0;
          for (int y = by; y < by + bh && sad <= best; ++y) {
            for (int x = bx; x < bx + bw; ++x) {
              sad +=
                  std::abs(ClampedAt(source, x + dx, y + dy) - target.at(x, y));
            }
          }
          const int norm = std::abs(dx) + std::abs(dy);
          if (sad < best || (sad == best && norm < best_norm)) {
            best = sad;
            best_dx = dx;
            best_dy = dy;
            best_norm = norm;
          }
        }
      }
      for (int y = by; y < by + bh; ++y) {
        for (int x = bx; x < bx + bw; ++x) {
          field.mx.at(x, y) = best_dx;
          field.my.at(x, y) = best_dy;
        }
      }
    }
  }
  return field;
}

Plane WarpPlane(const Plane& source, const MotionField& motion) {
  if (!source.SameShape(motion.mx) || !source.SameShape(motion.my)) {
    throw ValidationError("warp: motion field does not match source");
  }
  const int w = source.width();
  const int h = source.height();
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double sx = std::clamp(x + motion.mx.at(x, y), 0.0, w - 1.0);
      const double sy = std::clamp(y + motion.my.at(x, y), 0.0, h - 1.0);
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      const double top = (1 - fx) * source.at(x0, y0) + fx * source.at(x1, y0);
      const double bot = (1 - fx) * source.at(x0, y1) + fx * source.at(x1, y1);
      out.at(x, y) = (1 - fy) * top + fy * bot;
    }
  }
  return out;
}

Plane CompensateByBlockMatching(const Plane& source, const Plane& target,
                                const BlockMatchOptions& options) {
  return WarpPlane(source, BlockMatch(source, target, options));
}

}  // namespace mif
