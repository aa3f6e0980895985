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

#include "mif/nn/dense_unit.h"

#include "mif/error.h"

namespace mif::nn {

template <typename T>
DenseUnit<T>::DenseUnit(ParamSet<T>& params, const std::string& prefix,
                        int in_channels, int growth, bool final_unit, Rng& rng)
    : in_channels_(in_channels), growth_(growth), final_unit_(final_unit) {
  const std::vector<int> widths = LayerInputWidths();
  for (int k = 0; k < kLayers; ++k) {
    const std::string name = prefix + ".conv" + std::to_string(k);
    const bool last = k == kLayers - 1;
    if (last && final_unit) {
      // Zero output layer: the network starts as the identity residual.
      convs_[k] = ConvLayer<T>::Create(params, name, widths[k], 1, rng,
                                       WeightInit::kZero);
    } else {
      convs_[k] = ConvLayer<T>::Create(params, name, widths[k], growth, rng);
      acts_[k] = PreluLayer<T>::Create(params, name + ".act", growth);
    }
  }
}

template <typename T>
std::vector<int> DenseUnit<T>::LayerInputWidths() const {
  std::vector<int> widths;
  for (int k = 0; k < kLayers; ++k)
    widths.push_back(in_channels_ + k * growth_);
  return widths;
}

template <typename T>
Var DenseUnit<T>::Forward(Graph<T>& g, Var x) const {
  if (g.value(x).channels() != in_channels_) {
    throw ValidationError("dense unit: expected " +
                          std::to_string(in_channels_) + " channels, got " +
                          std::to_string(g.value(x).channels()));
  }
  std::vector<Var> features{x};
  std::vector<Var> outputs;
  for (int k = 0; k < kLayers; ++k) {
    const Var in = features.size() == 1 ? x : Concat(g, features);
    Var y = convs_[k](g, in);
    if (acts_[k].slope) y = acts_[k](g, y);
    features.push_back(y);
    outputs.push_back(y);
  }
  if (final_unit_) return outputs.back();
  return Concat(g, outputs);
}

template class DenseUnit<float>;
template class DenseUnit<double>;

}  // namespace mif::nn
