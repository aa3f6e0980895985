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

#include "mif/nn/layers.h"

#include <cmath>

#include "mif/error.h"

namespace mif::nn {

template <typename T>
ConvLayer<T> ConvLayer<T>::Create(ParamSet<T>& params, const std::string& name,
                                  int in, int out, Rng& rng, WeightInit init,
                                  T bias_init) {
  Tensor<T> w;
  switch (init) {
    case WeightInit::kFanIn:
      w = FanInUniform<T>(out, in, 9, rng);
      break;
    case WeightInit::kSmall:
      w = FanInUniform<T>(out, in, 9, rng, T(0.01));
      break;
    case WeightInit::kZero:
      w = Tensor<T>(out, in, 9);
      break;
  }
  ConvLayer layer;
  layer.weight = params.Add(name + ".weight", std::move(w));
  layer.bias = params.Add(name + ".bias", Tensor<T>(out, 1, 1, bias_init));
  return layer;
}

template <typename T>
PreluLayer<T> PreluLayer<T>::Create(ParamSet<T>& params,
                                    const std::string& name, int channels) {
  PreluLayer layer;
  layer.slope = params.Add(name + ".slope",
                           Tensor<T>(channels, 1, 1, T(kPreluInitSlope)));
  return layer;
}

template <typename T>
Var CenterSamples(Graph<T>& g, Var x) {
  const Tensor<T>& v = g.value(x);
  return Add(g, Scale(g, x, T(kInputScale)),
             g.Constant(Tensor<T>(v.channels(), v.height(), v.width(),
                                  T(-0.5 * kInputScale))));
}

template <typename T>
void CheckFinite(const Graph<T>& g, Var v, const std::string& layer) {
  for (T x : g.value(v).values()) {
    if (!std::isfinite(x)) {
      throw NumericError("non-finite activation in " + layer);
    }
  }
}

template struct ConvLayer<float>;
template struct ConvLayer<double>;
template struct PreluLayer<float>;
template struct PreluLayer<double>;
template Var CenterSamples<float>(Graph<float>&, Var);
template Var CenterSamples<double>(Graph<double>&, Var);
template void CheckFinite<float>(const Graph<float>&, Var, const std::string&);
template void CheckFinite<double>(const Graph<double>&, Var,
                                  const std::string&);

}  // namespace mif::nn
