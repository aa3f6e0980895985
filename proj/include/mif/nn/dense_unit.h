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

#ifndef MIF_NN_DENSE_UNIT_H_
#define MIF_NN_DENSE_UNIT_H_

#include <array>
#include <string>
#include <vector>

#include "mif/nn/layers.h"

namespace mif::nn {

// Four densely connected 3x3 conv layers. Layer k consumes the unit input
// concatenated with the outputs of layers 1..k-1. An ordinary unit returns
// the concatenation of all four layer outputs; a final unit returns only its
// last layer, a single linear channel.
template <typename T>
class DenseUnit {
 public:
  static constexpr int kLayers = 4;

  DenseUnit(ParamSet<T>& params, const std::string& prefix, int in_channels,
            int growth, bool final_unit, Rng& rng);

  Var Forward(Graph<T>& g, Var x) const;

  int in_channels() const { return in_channels_; }
  int out_channels() const { return final_unit_ ? 1 : kLayers * growth_; }
  bool final_unit() const { return final_unit_; }
  std::vector<int> LayerInputWidths() const;
  static constexpr int ConnectionCount() { return kLayers * (kLayers + 1) / 2; }

  const ConvLayer<T>& layer(int k) const { return convs_[k]; }

 private:
  int in_channels_;
  int growth_;
  bool final_unit_;
  std::array<ConvLayer<T>, kLayers> convs_;
  std::array<PreluLayer<T>, kLayers> acts_;
};

}  // namespace mif::nn

#endif  // MIF_NN_DENSE_UNIT_H_
