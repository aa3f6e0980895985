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

#include "mif/frame.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mif/error.h"

namespace mif {

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw ValidationError("plane dimensions must be nonnegative");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

bool Plane::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool Plane::AllInRange(double lo, double hi) const {
  return std::all_of(data_.begin(), data_.end(),
                     [&](double v) { return v >= lo && v <= hi; });
}

Plane Plane::Crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || w < 0 || h < 0 || x0 + w > width_ ||
      y0 + h > height_) {
    throw ValidationError("crop window outside plane");
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    std::copy_n(data_.begin() + Index(x0, y0 + y), w,
                out.data_.begin() + out.Index(0, y));
  }
  return out;
}

Plane Plane::Decimate2() const {
  Plane out(width_ / 2, height_ / 2);
  for (int y = 0; y < out.height_; ++y) {
    for (int x = 0; x < out.width_; ++x) out.at(x, y) = at(2 * x, 2 * y);
  }
  return out;
}

const char* RoleName(FrameRole role) {
  switch (role) {
    case FrameRole::kRaw:
      return "raw";
    case FrameRole::kUrf:
      return "urf";
    case FrameRole::kPool:
      return "pool";
    case FrameRole::kReference:
      return "reference";
    case FrameRole::kCompensated:
      return "compensated";
    case FrameRole::kEnhanced:
      return "enhanced";
    case FrameRole::kDifference:
      return "difference";
  }
  return "unknown";
}

Frame Frame::Blank(int width, int height, FrameRole role, int index,
                   double fill) {
  Frame f;
  f.y = Plane(width, height, fill);
  f.u = Plane(width / 2, height / 2, fill);
  f.v = Plane(width / 2, height / 2, fill);
  f.role = role;
  f.index = index;
  return f;
}

void Frame::Validate() const {
  const int w = y.width();
  const int h = y.height();
  if (w <= 0 || h <= 0 || w % 2 != 0 || h % 2 != 0) {
    throw ValidationError("frame dimensions must be positive and even, got " +
                          std::to_string(w) + "x" + std::to_string(h));
  }
  for (const Plane* c : {&u, &v}) {
    if (c->width() != w / 2 || c->height() != h / 2) {
      throw ValidationError("chroma planes must be half resolution");
    }
  }
  const bool bounded = role == FrameRole::kRaw || role == FrameRole::kUrf ||
                       role == FrameRole::kReference;
  for (int c = 0; c < 3; ++c) {
    if (!channel(c).AllFinite()) {
      throw ValidationError("frame contains non-finite samples");
    }
    if (bounded && !channel(c).AllInRange(0.0, 1.0)) {
      throw ValidationError(std::string(RoleName(role)) +
                            " frame has samples outside [0,1]");
    }
  }
}

}  // namespace mif
