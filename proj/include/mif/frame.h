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

#ifndef MIF_FRAME_H_
#define MIF_FRAME_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mif {

// Row-major 2-D array of real samples.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y) { return data_[Index(x, y)]; }
  double at(int x, int y) const { return data_[Index(x, y)]; }

  std::span<double> samples() { return data_; }
  std::span<const double> samples() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool SameShape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool AllFinite() const;
  bool AllInRange(double lo, double hi) const;

  // Copy of the w x h window starting at (x0, y0). The window must lie
  // inside the plane.
  Plane Crop(int x0, int y0, int w, int h) const;

  // 2x decimation (every other sample, starting at the origin).
  Plane Decimate2() const;

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

enum class FrameRole {
  kRaw,
  kUrf,
  kPool,
  kReference,
  kCompensated,
  kEnhanced,
  kDifference,
};

const char* RoleName(FrameRole role);

// Planar 4:2:0 picture. Luma is width x height, both chroma planes are half
// resolution in each dimension.
struct Frame {
  Plane y;
  Plane u;
  Plane v;
  FrameRole role = FrameRole::kRaw;
  int index = 0;
  std::optional<int> qp;

  static Frame Blank(int width, int height, FrameRole role, int index,
                     double fill = 0.0);

  int width() const { return y.width(); }
  int height() const { return y.height(); }

  const Plane& channel(int c) const { return c == 0 ? y : (c == 1 ? u : v); }
  Plane& channel(int c) { return c == 0 ? y : (c == 1 ? u : v); }

  // Throws ValidationError when the layout or sample-range invariants for
  // this frame's role do not hold.
  void Validate() const;
};

}  // namespace mif

#endif  // MIF_FRAME_H_
