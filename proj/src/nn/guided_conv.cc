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

#include "mif/nn/guided_conv.h"

#include "mif/error.h"

namespace mif::nn {

template <typename T>
GuidedConv<T>::GuidedConv(ParamSet<T>& params, const std::string& prefix,
                          int p_in, int p_guide, int p_out, Rng& rng)
    : p_in_(p_in), p_guide_(p_guide), p_out_(p_out) {
  guide_hidden_ = ConvLayer<T>::Create(params, prefix + ".guide0", p_guide,
                                       kGuidanceWidth, rng);
  guide_act_ =
      PreluLayer<T>::Create(params, prefix + ".guide0.act", kGuidanceWidth);
  // Small weights and unit bias: training starts as a plain convolution.
  guide_out_ = ConvLayer<T>::Create(params, prefix + ".guide1", kGuidanceWidth,
                                    p_out, rng, WeightInit::kSmall, T(1));
  weight_ =
      params.Add(prefix + ".weight", FanInUniform<T>(p_out, p_in, 9, rng));
  bias_ = params.Add(prefix + ".bias", Tensor<T>(p_out, 1, 1));
}

template <typename T>
Var GuidedConv<T>::Intermediate(Graph<T>& g, Var guidance) const {
  if (g.value(guidance).channels() != p_guide_) {
    throw ValidationError("guided conv: expected " + std::to_string(p_guide_) +
                          " guidance maps");
  }
  return guide_out_(g, guide_act_(g, guide_hidden_(g, guidance)));
}

template <typename T>
Var GuidedConv<T>::Forward(Graph<T>& g, Var input, Var guidance) const {
  if (g.value(input).channels() != p_in_) {
    throw ValidationError("guided conv: expected " + std::to_string(p_in_) +
                          " input maps, got " +
                          std::to_string(g.value(input).channels()));
  }
  const Var mid = Intermediate(g, guidance);
  return GuidedConv3x3(g, input, mid, g.Param(*weight_), g.Param(*bias_));
}

template class GuidedConv<float>;
template class GuidedConv<double>;

}  // namespace mif::nn
