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

#include "mif/nn/mc_net.h"

#include "mif/error.h"

namespace mif::nn {

template <typename T>
typename McNet<T>::Path McNet<T>::MakePath(ParamSet<T>& params,
                                           const std::string& name, int in,
                                           int channels, Rng& rng) {
  Path p;
  p.name = name;
  for (int k = 0; k < kBodyLayers; ++k) {
    const std::string layer = name + ".conv" + std::to_string(k);
    p.body[k] = ConvLayer<T>::Create(params, layer, k == 0 ? in : channels,
                                     channels, rng);
    p.act[k] = PreluLayer<T>::Create(params, layer + ".act", channels);
  }
  // A zero head starts every path at zero displacement.
  p.head = ConvLayer<T>::Create(params, name + ".head", channels, 2, rng,
                                WeightInit::kZero);
  return p;
}

template <typename T>
Var McNet<T>::Path::Forward(Graph<T>& g, Var x) const {
  const Var h0 = act[0](g, body[0](g, x));
  const Var h1 = act[1](g, body[1](g, h0));
  const Var h2 = Add(g, act[2](g, body[2](g, h1)), h0);
  const Var h3 = act[3](g, body[3](g, h2));
  const Var h4 = Add(g, act[4](g, body[4](g, h3)), h2);
  const Var out = head(g, h4);
  CheckFinite(g, out, name);
  return out;
}

template <typename T>
McNet<T>::McNet(ParamSet<T>& params, const std::string& prefix,
                const McNetOptions& options, Rng& rng)
    : options_(options) {
  coarse_ = MakePath(params, prefix + ".x4", 2, options.channels, rng);
  middle_ = MakePath(params, prefix + ".x2", 4, options.channels, rng);
  if (options.full_scale_path) {
    full_ = MakePath(params, prefix + ".x1", 4, options.channels, rng);
  }
}

template <typename T>
typename McNet<T>::Result McNet<T>::Forward(Graph<T>& g, Var reference,
                                            Var target) const {
  const Tensor<T>& ref = g.value(reference);
  const Tensor<T>& tgt = g.value(target);
  if (!ref.SameShape(tgt) || ref.channels() != 1) {
    throw ValidationError("motion compensation: reference " +
                          ref.ShapeString() + " and target " +
                          tgt.ShapeString() + " must be equal 1-channel");
  }
  if (ref.height() % 4 != 0 || ref.width() % 4 != 0) {
    throw ValidationError(
        "motion compensation: height and width must be divisible by 4");
  }
  const Var ref2 = AvgPool2(g, reference);
  const Var tgt2 = AvgPool2(g, target);
  const Var ref4 = AvgPool2(g, ref2);
  const Var tgt4 = AvgPool2(g, tgt2);

  const Var f4 = coarse_.Forward(
      g, Concat(g, {CenterSamples(g, ref4), CenterSamples(g, tgt4)}));
  const Var f4_up = Scale(g, Upsample2(g, f4), T(2));
  const Var warped2 = Warp(g, ref2, f4_up);
  const Var f2 =
      Add(g, f4_up,
          middle_.Forward(g, Concat(g, {CenterSamples(g, warped2),
                                        CenterSamples(g, tgt2), f4_up})));
  const Var f2_up = Scale(g, Upsample2(g, f2), T(2));

  Var flow = f2_up;
  if (options_.full_scale_path) {
    const Var warped1 = Warp(g, reference, f2_up);
    const Var r =
        full_.Forward(g, Concat(g, {CenterSamples(g, warped1),
                                    CenterSamples(g, target), f2_up}));
    flow = options_.absolute_full_scale ? r : Add(g, f2_up, r);
  }
  return {flow, Warp(g, reference, flow)};
}

template class McNet<float>;
template class McNet<double>;

}  // namespace mif::nn
