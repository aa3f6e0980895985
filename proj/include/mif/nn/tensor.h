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

#ifndef MIF_NN_TENSOR_H_
#define MIF_NN_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mif/frame.h"

namespace mif::nn {

// Dense channels x height x width array. Convolution weights use the same
// container as (out, in, 9) with the 3x3 taps in row-major order.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, T fill = T(0))
      : c_(channels),
        h_(height),
        w_(width),
        data_(static_cast<std::size_t>(channels) * height * width, fill) {}

  int channels() const { return c_; }
  int height() const { return h_; }
  int width() const { return w_; }
  std::size_t size() const { return data_.size(); }
  std::size_t plane_size() const { return static_cast<std::size_t>(h_) * w_; }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T* channel(int c) { return data_.data() + c * plane_size(); }
  const T* channel(int c) const { return data_.data() + c * plane_size(); }

  T& at(int c, int y, int x) { return data_[Index(c, y, x)]; }
  T at(int c, int y, int x) const { return data_[Index(c, y, x)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool SameShape(const Tensor& o) const {
    return c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }
  std::string ShapeString() const {
    return std::to_string(c_) + "x" + std::to_string(h_) + "x" +
           std::to_string(w_);
  }
  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  Tensor<U> Cast() const {
    Tensor<U> out(c_, h_, w_);
    std::copy(data_.begin(), data_.end(), out.data());
    return out;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t Index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * h_ + y) * w_ + x;
  }

  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  std::vector<T> data_;
};

template <typename T>
Tensor<T> FromPlane(const Plane& p) {
  Tensor<T> t(1, p.height(), p.width());
  std::copy(p.data(), p.data() + p.size(), t.data());
  return t;
}

// Stacks equally sized planes as channels.
template <typename T>
Tensor<T> FromPlanes(std::span<const Plane* const> planes) {
  const Plane& first = *planes.front();
  Tensor<T> t(static_cast<int>(planes.size()), first.height(), first.width());
  for (std::size_t c = 0; c < planes.size(); ++c) {
    std::copy(planes[c]->data(), planes[c]->data() + planes[c]->size(),
              t.channel(static_cast<int>(c)));
  }
  return t;
}

template <typename T>
Plane ToPlane(const Tensor<T>& t, int channel = 0) {
  Plane p(t.width(), t.height());
  std::copy(t.channel(channel), t.channel(channel) + t.plane_size(), p.data());
  return p;
}

}  // namespace mif::nn

#endif  // MIF_NN_TENSOR_H_
