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

#ifndef MIF_NN_MC_NET_H_
#define MIF_NN_MC_NET_H_

#include <array>
#include <string>

#include "mif/nn/layers.h"

namespace mif::nn {

struct McNetOptions {
  int channels = 24;
  // Without the full-scale path the network degenerates to the two-path
  // (x4, x2) compensation and the x2 field is upsampled to full size.
  bool full_scale_path = true;
  // Full-scale path predicts the whole field instead of a residual.
  bool absolute_full_scale = false;
};

// Coarse-to-fine motion compensation. The x4 path predicts a field from
// 4x-downscaled inputs; each finer path sees the reference pre-warped by the
// upsampled coarser field and predicts a residual. Each path is five 3x3
// conv + PReLU layers with two identity shortcuts and a linear 2-channel
// head.
template <typename T>
class McNet {
 public:
  static constexpr int kBodyLayers = 5;
  static constexpr int kShortcutsPerPath = 2;

  McNet(ParamSet<T>& params, const std::string& prefix,
        const McNetOptions& options, Rng& rng);

  struct Result {
    Var flow;         // (2, H, W): horizontal, vertical displacement
    Var compensated;  // reference warped by flow
  };

  // reference and target are (1, H, W) with H and W divisible by 4.
  Result Forward(Graph<T>& g, Var reference, Var target) const;

  const McNetOptions& options() const { return options_; }
  int shortcut_count() const {
    return kShortcutsPerPath * (options_.full_scale_path ? 3 : 2);
  }

 private:
  struct Path {
    std::array<ConvLayer<T>, kBodyLayers> body;
    std::array<PreluLayer<T>, kBodyLayers> act;
    ConvLayer<T> head;
    std::string name;

    Var Forward(Graph<T>& g, Var x) const;
  };

  static Path MakePath(ParamSet<T>& params, const std::string& name, int in,
                       int channels, Rng& rng);

  McNetOptions options_;
  Path coarse_;
  Path middle_;
  Path full_;
};

}  // namespace mif::nn

#endif  // MIF_NN_MC_NET_H_
