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

#ifndef MIF_NN_LAYERS_H_
#define MIF_NN_LAYERS_H_

#include <string>
#include <vector>

#include "mif/nn/graph.h"
#include "mif/nn/ops.h"
#include "mif/nn/params.h"

namespace mif::nn {

inline constexpr float kPreluInitSlope = 0.25f;

enum class WeightInit { kFanIn, kZero, kSmall };

template <typename T>
struct ConvLayer {
  Parameter<T>* weight = nullptr;
  Parameter<T>* bias = nullptr;

  static ConvLayer Create(ParamSet<T>& params, const std::string& name, int in,
                          int out, Rng& rng,
                          WeightInit init = WeightInit::kFanIn,
                          T bias_init = T(0));

  int in_channels() const { return weight->value.height(); }
  int out_channels() const { return weight->value.channels(); }

  Var operator()(Graph<T>& g, Var x) const {
    return Conv3x3(g, x, g.Param(*weight), g.Param(*bias));
  }
};

template <typename T>
struct PreluLayer {
  Parameter<T>* slope = nullptr;

  static PreluLayer Create(ParamSet<T>& params, const std::string& name,
                           int channels);

  Var operator()(Graph<T>& g, Var x) const {
    return Prelu(g, x, g.Param(*slope));
  }
};

// Throws NumericError naming `layer` when `v` holds a non-finite value.
// Sample-domain inputs enter the networks as kInputScale * (x - 0.5), which
// maps [0,1] to roughly [-2,2]. Differences of samples use Scale only.
inline constexpr double kInputScale = 4.0;

template <typename T>
Var CenterSamples(Graph<T>& g, Var x);

template <typename T>
void CheckFinite(const Graph<T>& g, Var v, const std::string& layer);

}  // namespace mif::nn

#endif  // MIF_NN_LAYERS_H_
