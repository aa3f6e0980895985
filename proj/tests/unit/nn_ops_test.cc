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

#include <functional>

#include "doctest.h"
#include "mif/error.h"
#include "mif/nn/guided_conv.h"
#include "mif/nn/ops.h"
#include "oracles.h"
#include "test_support.h"

namespace mif::nn {
namespace {

using testing::FiniteDifferenceCheck;
using testing::RandomTensor;
using testing::Uniform;
using testing::UniformInt;
using G = Graph<double>;

double MaxAbsDiff(const Tensor<double>& a, const Tensor<double>& b) {
  REQUIRE(a.SameShape(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

// Checks d/d(inputs) of sum((build(inputs) - target)^2) against central
// differences and returns the worst relative error.
double InputGradientError(
    std::vector<Tensor<double>>& inputs,
    const std::function<Var(G&, const std::vector<Var>&)>& build,
    testing::Rng& rng) {
  Tensor<double> target;
  auto loss = [&](bool grad, std::vector<double>* analytic) {
    G g(grad);
    std::vector<Var> vars;
    for (const auto& t : inputs) vars.push_back(g.Variable(t));
    const Var out = build(g, vars);
    if (target.empty()) {
      const Tensor<double>& o = g.value(out);
      target = RandomTensor<double>(rng, o.channels(), o.height(), o.width());
    }
    const Var l = SumSquaredDiff(g, out, g.Constant(target));
    if (analytic) {
      g.Backward(l);
      for (const Var v : vars) {
        const Tensor<double>* gr = g.grad(v);
        for (std::size_t i = 0; i < g.value(v).size(); ++i) {
          analytic->push_back(gr ? (*gr)[i] : 0.0);
        }
      }
    }
    return g.value(l)[0];
  };
  std::vector<double> analytic;
  loss(true, &analytic);
  std::vector<double*> entries;
  for (auto& t : inputs) {
    for (double& v : t.values()) entries.push_back(&v);
  }
  return FiniteDifferenceCheck(entries, analytic,
                               [&] { return loss(false, nullptr); });
}

TEST_CASE("conv3x3 matches the loop oracle") {
  testing::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int h = UniformInt(rng, 1, 9);
    const int w = UniformInt(rng, 1, 9);
    const int cin = UniformInt(rng, 1, 4);
    const int cout = UniformInt(rng, 1, 5);
    const auto x = RandomTensor<double>(rng, cin, h, w);
    const auto wt = RandomTensor<double>(rng, cout, cin, 9);
    const auto b = RandomTensor<double>(rng, cout, 1, 1);
    G g(false);
    const Var y = Conv3x3(g, g.Constant(x), g.Constant(wt), g.Constant(b));
    CHECK(MaxAbsDiff(g.value(y), oracle::Conv3x3(x, wt, b)) <= 1e-12);
  }
}

TEST_CASE("conv3x3 rejects a mismatched weight") {
  G g(false);
  const Var x = g.Constant(Tensor<double>(2, 4, 4));
  CHECK_THROWS_AS(Conv3x3(g, x, g.Constant(Tensor<double>(3, 1, 9)),
                          g.Constant(Tensor<double>(3, 1, 1))),
                  ValidationError);
}

TEST_CASE("guided conv op matches the loop oracle on random instances") {
  testing::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = UniformInt(rng, 1, 16);
    const int w = UniformInt(rng, 1, 16);
    const int pi = UniformInt(rng, 1, 3);
    const int po = UniformInt(rng, 1, 16);
    const auto in = RandomTensor<double>(rng, pi, h, w);
    const auto mid = RandomTensor<double>(rng, po, h, w, -2.0, 2.0);
    const auto wt = RandomTensor<double>(rng, po, pi, 9);
    const auto b = RandomTensor<double>(rng, po, 1, 1);
    G g(false);
    const Var y = GuidedConv3x3(g, g.Constant(in), g.Constant(mid),
                                g.Constant(wt), g.Constant(b));
    CHECK(MaxAbsDiff(g.value(y), oracle::GuidedConv(in, mid, wt, b)) <= 1e-12);
  }
}

TEST_CASE("guided conv with unit and zero intermediate maps") {
  testing::Rng rng(33);
  const auto in = RandomTensor<double>(rng, 3, 7, 9);
  const auto wt = RandomTensor<double>(rng, 4, 3, 9);
  const auto b = RandomTensor<double>(rng, 4, 1, 1);
  G g(false);
  const Var ones =
      GuidedConv3x3(g, g.Constant(in), g.Constant(Tensor<double>(4, 7, 9, 1.0)),
                    g.Constant(wt), g.Constant(b));
  const Var conv = Conv3x3(g, g.Constant(in), g.Constant(wt), g.Constant(b));
  CHECK(MaxAbsDiff(g.value(ones), g.value(conv)) <= 1e-12);
  const Var zeros =
      GuidedConv3x3(g, g.Constant(in), g.Constant(Tensor<double>(4, 7, 9)),
                    g.Constant(wt), g.Constant(b));
  for (int l = 0; l < 4; ++l) {
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 9; ++x) CHECK(g.value(zeros).at(l, y, x) == b[l]);
    }
  }
}

TEST_CASE("guided conv layer reduces to plain conv under unit guidance") {
  testing::Rng rng(34);
  ParamSet<double> params;
  GuidedConv<double> layer(params, "gc", 3, 2, 5, rng);
  // Force the guidance subnet to emit exactly one.
  layer.guide_out().weight->value.Fill(0.0);
  layer.guide_out().bias->value.Fill(1.0);
  const auto in = RandomTensor<double>(rng, 3, 10, 12);
  const auto guide = RandomTensor<double>(rng, 2, 10, 12);
  G g(false);
  const Var y = layer.Forward(g, g.Constant(in), g.Constant(guide));
  const auto expect =
      oracle::Conv3x3(in, layer.weight().value, layer.bias().value);
  CHECK(MaxAbsDiff(g.value(y), expect) <= 1e-6);
  CHECK_THROWS_AS(layer.Forward(g, g.Constant(guide), g.Constant(guide)),
                  ValidationError);
}

TEST_CASE("zero-field warp is bit-identical to the source") {
  testing::Rng rng(35);
  const auto src = RandomTensor<float>(rng, 2, 11, 13, 0.0, 1.0);
  Graph<float> g(false);
  const Var out =
      Warp(g, g.Constant(src), g.Constant(Tensor<float>(2, 11, 13)));
  CHECK(g.value(out) == src);
}

TEST_CASE("integer warp is an exact shift on supported pixels") {
  testing::Rng rng(36);
  const auto src = RandomTensor<double>(rng, 1, 10, 12, 0.0, 1.0);
  Tensor<double> flow(2, 10, 12);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 12; ++x) flow.at(0, y, x) = 2.0;
  }
  G g(false);
  const auto& out = g.value(Warp(g, g.Constant(src), g.Constant(flow)));
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 12; ++x) {
      CHECK(out.at(0, y, x) == src.at(0, y, std::min(x + 2, 11)));
    }
  }
}

TEST_CASE("half-pixel warp of a ramp interpolates linearly") {
  const int w = 16;
  Tensor<double> src(1, 4, w);
  Tensor<double> flow(2, 4, w);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < w; ++x) {
      src.at(0, y, x) = static_cast<double>(x) / w;
      flow.at(0, y, x) = 0.5;
    }
  }
  G g(false);
  const auto& out = g.value(Warp(g, g.Constant(src), g.Constant(flow)));
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      CHECK(out.at(0, y, x) == doctest::Approx((x + 0.5) / w).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: warp matches the bilinear oracle and composes shifts") {
  testing::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = UniformInt(rng, 4, 12);
    const int w = UniformInt(rng, 4, 12);
    const auto src = RandomTensor<double>(rng, 2, h, w, 0.0, 1.0);
    const auto flow = RandomTensor<double>(rng, 2, h, w, -3.0, 3.0);
    G g(false);
    const auto& out = g.value(Warp(g, g.Constant(src), g.Constant(flow)));
    for (int c = 0; c < 2; ++c) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double expect = oracle::Bilinear(src, c, x + flow.at(0, y, x),
                                                 y + flow.at(1, y, x));
          CHECK(std::abs(out.at(c, y, x) - expect) <= 1e-12);
        }
      }
    }

    const int a = UniformInt(rng, -2, 2);
    const int b = UniformInt(rng, -2, 2);
    auto constant = [&](int dx) {
      Tensor<double> f(2, h, w);
      std::fill(f.channel(0), f.channel(0) + f.plane_size(), double(dx));
      return f;
    };
    G g2(false);
    const Var once = Warp(g2, g2.Constant(src), g2.Constant(constant(a)));
    const Var twice = Warp(g2, once, g2.Constant(constant(b)));
    const Var direct = Warp(g2, g2.Constant(src), g2.Constant(constant(a + b)));
    // Full support: x + b and x + a + b both land inside the frame.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x + b < 0 || x + b >= w || x + a + b < 0 || x + a + b >= w)
          continue;
        CHECK(g2.value(twice).at(0, y, x) == g2.value(direct).at(0, y, x));
      }
    }
  }
}

TEST_CASE("warp rejects a mismatched flow") {
  G g(false);
  CHECK_THROWS_AS(Warp(g, g.Constant(Tensor<double>(1, 8, 8)),
                       g.Constant(Tensor<double>(2, 8, 7))),
                  ValidationError);
  CHECK_THROWS_AS(Warp(g, g.Constant(Tensor<double>(1, 8, 8)),
                       g.Constant(Tensor<double>(1, 8, 8))),
                  ValidationError);
}

TEST_CASE("warp gradients match finite differences") {
  testing::Rng rng(38);
  const int n = 8;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Tensor<double>> inputs = {
        RandomTensor<double>(rng, 1, n, n, 0.0, 1.0), Tensor<double>(2, n, n)};
    // Sampling points strictly inside cells so the field is differentiable.
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        inputs[1].at(0, y, x) =
            UniformInt(rng, 0, n - 2) + Uniform(rng, 0.2, 0.8) - x;
        inputs[1].at(1, y, x) =
            UniformInt(rng, 0, n - 2) + Uniform(rng, 0.2, 0.8) - y;
      }
    }
    const double err = InputGradientError(
        inputs,
        [](G& g, const std::vector<Var>& v) { return Warp(g, v[0], v[1]); },
        rng);
    CHECK(err <= 1e-3);
  }
}

TEST_CASE("conv, prelu, pooling and upsampling gradients") {
  testing::Rng rng(39);
  std::vector<Tensor<double>> inputs = {
      RandomTensor<double>(rng, 2, 6, 8), RandomTensor<double>(rng, 3, 2, 9),
      RandomTensor<double>(rng, 3, 1, 1), Tensor<double>(3, 1, 1, 0.25)};
  const double err = InputGradientError(
      inputs,
      [](G& g, const std::vector<Var>& v) {
        const Var c = Prelu(g, Conv3x3(g, v[0], v[1], v[2]), v[3]);
        return Upsample2(g, AvgPool2(g, c));
      },
      rng);
  CHECK(err <= 1e-3);
}

TEST_CASE("guided conv gradients match finite differences") {
  testing::Rng rng(40);
  ParamSet<double> params;
  GuidedConv<double> layer(params, "gc", 2, 1, 2, rng);
  // Move the guidance subnet away from its warm start so every path matters.
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (double& v : params[i].value.values()) v += Uniform(rng, -0.3, 0.3);
  }
  auto in = RandomTensor<double>(rng, 2, 8, 8);
  auto guide = RandomTensor<double>(rng, 1, 8, 8);
  const auto target = RandomTensor<double>(rng, 2, 8, 8);

  auto run = [&](bool grad) {
    G g(grad);
    const Var vi = g.Variable(in);
    const Var vg = g.Variable(guide);
    const Var l =
        SumSquaredDiff(g, layer.Forward(g, vi, vg), g.Constant(target));
    std::vector<double> analytic;
    if (grad) {
      params.ZeroGrad();
      g.Backward(l);
      for (const Var v : {vi, vg}) {
        for (double d : g.grad(v)->values()) analytic.push_back(d);
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        for (double d : params[i].grad.values()) analytic.push_back(d);
      }
    }
    return std::make_pair(g.value(l)[0], analytic);
  };
  const auto analytic = run(true).second;
  std::vector<double*> entries;
  for (double& v : in.values()) entries.push_back(&v);
  for (double& v : guide.values()) entries.push_back(&v);
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (double& v : params[i].value.values()) entries.push_back(&v);
  }
  REQUIRE(entries.size() == analytic.size());
  CHECK(FiniteDifferenceCheck(entries, analytic,
                              [&] { return run(false).first; }) <= 1e-3);
}

TEST_CASE("concat, slice and pooling shapes") {
  testing::Rng rng(41);
  const auto a = RandomTensor<double>(rng, 2, 4, 6);
  const auto b = RandomTensor<double>(rng, 3, 4, 6);
  G g(false);
  const Var cat = Concat(g, {g.Constant(a), g.Constant(b)});
  CHECK(g.value(cat).channels() == 5);
  CHECK(g.value(SliceChannels(g, cat, 2, 3)) == b);
  const Var pooled = AvgPool2(g, g.Constant(a));
  CHECK(g.value(pooled).height() == 2);
  CHECK(
      g.value(pooled).at(1, 1, 2) ==
      doctest::Approx(
          (a.at(1, 2, 4) + a.at(1, 2, 5) + a.at(1, 3, 4) + a.at(1, 3, 5)) / 4));
  const Var up = Upsample2(g, g.Constant(Tensor<double>(1, 3, 3, 0.7)));
  CHECK(g.value(up).width() == 6);
  for (double v : g.value(up).values()) CHECK(v == doctest::Approx(0.7));
  CHECK_THROWS_AS(AvgPool2(g, g.Constant(Tensor<double>(1, 3, 4))),
                  ValidationError);
}

}  // namespace
}  // namespace mif::nn
