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

#ifndef MIF_NN_GUIDED_CONV_H_
#define MIF_NN_GUIDED_CONV_H_

#include <string>

#include "mif/nn/layers.h"

namespace mif::nn {

// Convolution whose taps are modulated per pixel by intermediate maps that
// a two-layer guidance subnet derives from the partition maps. With
// intermediate maps fixed at 1 it is an ordinary 3x3 convolution.
template <typename T>
class GuidedConv {
 public:
  static constexpr int kGuidanceWidth = 8;

  GuidedConv(ParamSet<T>& params, const std::string& prefix, int p_in,
             int p_guide, int p_out, Rng& rng);

  int p_in() const { return p_in_; }
  int p_guide() const { return p_guide_; }
  int p_out() const { return p_out_; }

  // (p_guide, H, W) -> (p_out, H, W).
  Var Intermediate(Graph<T>& g, Var guidance) const;
  Var Forward(Graph<T>& g, Var input, Var guidance) const;

  Parameter<T>& weight() { return *weight_; }
  Parameter<T>& bias() { return *bias_; }
  const ConvLayer<T>& guide_hidden() const { return guide_hidden_; }
  const ConvLayer<T>& guide_out() const { return guide_out_; }

 private:
  int p_in_;
  int p_guide_;
  int p_out_;
  ConvLayer<T> guide_hidden_;
  PreluLayer<T> guide_act_;
  ConvLayer<T> guide_out_;
  Parameter<T>* weight_;
  Parameter<T>* bias_;
};

}  // namespace mif::nn

#endif  // MIF_NN_GUIDED_CONV_H_
