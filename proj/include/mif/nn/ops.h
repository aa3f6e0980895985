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

#ifndef MIF_NN_OPS_H_
#define MIF_NN_OPS_H_

#include <vector>

#include "mif/nn/graph.h"

namespace mif::nn {

// 3x3 convolution, stride 1, zero padding. weight is (out, in, 9), bias is
// (out, 1, 1).
template <typename T>
Var Conv3x3(Graph<T>& g, Var x, Var weight, Var bias);

// Per-channel parametric ReLU; slope is (C, 1, 1).
template <typename T>
Var Prelu(Graph<T>& g, Var x, Var slope);

template <typename T>
Var Add(Graph<T>& g, Var a, Var b);

template <typename T>
Var Sub(Graph<T>& g, Var a, Var b);

template <typename T>
Var Scale(Graph<T>& g, Var x, T factor);

template <typename T>
Var Concat(Graph<T>& g, const std::vector<Var>& parts);

template <typename T>
Var SliceChannels(Graph<T>& g, Var x, int begin, int count);

// 2x2 average pooling with stride 2. Height and width must be even.
template <typename T>
Var AvgPool2(Graph<T>& g, Var x);

// Bilinear 2x upsampling with half-pixel centers and edge clamping.
template <typename T>
Var Upsample2(Graph<T>& g, Var x);

// out(c, y, x) = Bil{src(c, y + flow(1, y, x), x + flow(0, y, x))}.
// Sampling positions are clamped to the frame. flow is (2, H, W) holding
// horizontal then vertical displacement in pixels.
template <typename T>
Var Warp(Graph<T>& g, Var src, Var flow);

// Block-adaptive convolution:
//   out_l(p) = bias_l + sum_j sum_d w_{l,j}(d) * inter_l(p + d) * in_j(p + d)
// over the 3x3 neighbourhood d with zero padding. input is (Pi, H, W),
// intermediate is (Po, H, W), weight (Po, Pi, 9), bias (Po, 1, 1).
template <typename T>
Var GuidedConv3x3(Graph<T>& g, Var input, Var intermediate, Var weight,
                  Var bias);

template <typename T>
Var Clamp(Graph<T>& g, Var x, T lo, T hi);

// Scalar sum of squared differences.
template <typename T>
Var SumSquaredDiff(Graph<T>& g, Var a, Var b);

// Scalar sum_i coeffs[i] * terms[i] over scalar terms.
template <typename T>
Var LinearCombination(Graph<T>& g, const std::vector<Var>& terms,
                      const std::vector<T>& coeffs);

}  // namespace mif::nn

#endif  // MIF_NN_OPS_H_
