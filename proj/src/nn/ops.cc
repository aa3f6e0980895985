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

#include "mif/nn/ops.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "mif/error.h"

namespace mif::nn {
namespace {

template <typename T>
using RowMat =
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

void Require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

template <typename T>
std::vector<T>& Scratch(int slot) {
  thread_local std::vector<T> buffers[2];
  return buffers[slot];
}

// Rows of `col` are (input channel, tap), columns are output pixels.
template <typename T>
void Im2Col(const T* x, int channels, int h, int w, T* col) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  for (int c = 0; c < channels; ++c) {
    for (int k = 0; k < 9; ++k) {
      const int dy = k / 3 - 1;
      const int dx = k % 3 - 1;
      T* row = col + (static_cast<std::size_t>(c) * 9 + k) * hw;
      const int x0 = std::max(0, -dx);
      const int x1 = std::min(w, w - dx);
      for (int y = 0; y < h; ++y) {
        T* out = row + static_cast<std::size_t>(y) * w;
        const int sy = y + dy;
        if (sy < 0 || sy >= h) {
          std::fill(out, out + w, T(0));
          continue;
        }
        const T* in = x + c * hw + static_cast<std::size_t>(sy) * w;
        std::fill(out, out + x0, T(0));
        std::copy(in + x0 + dx, in + x1 + dx, out + x0);
        std::fill(out + x1, out + w, T(0));
      }
    }
  }
}

template <typename T>
void Col2ImAdd(const T* col, int channels, int h, int w, T* x) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  for (int c = 0; c < channels; ++c) {
    for (int k = 0; k < 9; ++k) {
      const int dy = k / 3 - 1;
      const int dx = k % 3 - 1;
      const T* row = col + (static_cast<std::size_t>(c) * 9 + k) * hw;
      const int x0 = std::max(0, -dx);
      const int x1 = std::min(w, w - dx);
      for (int y = 0; y < h; ++y) {
        const int sy = y + dy;
        if (sy < 0 || sy >= h) continue;
        const T* in = row + static_cast<std::size_t>(y) * w;
        T* out = x + c * hw + static_cast<std::size_t>(sy) * w;
        for (int xx = x0; xx < x1; ++xx) out[xx + dx] += in[xx];
      }
    }
  }
}

// Bilinear sampling position along one axis with border clamping.
struct Tap {
  int i0;
  int i1;
  double f;     // weight of i1
  bool inside;  // false when the position was clamped
};

inline Tap MakeTap(double pos, int n) {
  Tap t;
  const double hi = n - 1;
  t.inside = pos >= 0.0 && pos <= hi;
  const double p = std::clamp(pos, 0.0, hi);
  const double fl = std::floor(p);
  t.i0 = static_cast<int>(fl);
  t.i1 = std::min(t.i0 + 1, n - 1);
  t.f = p - fl;
  return t;
}

}  // namespace

template <typename T>
Var Conv3x3(Graph<T>& g, Var x, Var weight, Var bias) {
  const Tensor<T>& in = g.value(x);
  const Tensor<T>& wt = g.value(weight);
  const Tensor<T>& b = g.value(bias);
  Require(wt.width() == 9 && wt.height() == in.channels(),
          "conv3x3: weight " + wt.ShapeString() + " does not match input " +
              in.ShapeString());
  Require(b.size() == static_cast<std::size_t>(wt.channels()),
          "conv3x3: bias size mismatch");
  const int cin = in.channels();
  const int cout = wt.channels();
  const int h = in.height();
  const int w = in.width();
  const int k = cin * 9;
  const int n = h * w;

  std::vector<T>& col = Scratch<T>(0);
  col.resize(static_cast<std::size_t>(k) * n);
  Im2Col(in.data(), cin, h, w, col.data());
  Tensor<T> out(cout, h, w);
  MapMat<T> ym(out.data(), cout, n);
  ym.noalias() =
      ConstMapMat<T>(wt.data(), cout, k) * ConstMapMat<T>(col.data(), k, n);
  for (int o = 0; o < cout; ++o) ym.row(o).array() += b[o];

  return g.Record(std::move(out), {x, weight, bias},
                  [x, weight, bias](Graph<T>& g, int node) {
                    const Tensor<T>& in = g.value(x);
                    const Tensor<T>& wt = g.value(weight);
                    const Tensor<T>& dy = g.OutputGrad(node);
                    const int cin = in.channels();
                    const int cout = wt.channels();
                    const int h = in.height();
                    const int w = in.width();
                    const int k = cin * 9;
                    const int n = h * w;
                    ConstMapMat<T> dym(dy.data(), cout, n);
                    if (g.requires_grad(bias)) {
                      Tensor<T>& db = g.GradRef(bias);
                      // Plain loop: Eigen's vectorized reduction order depends
                      // on the buffer alignment, which would make training runs
                      // irreproducible.
                      for (int o = 0; o < cout; ++o) {
                        const T* row =
                            dy.data() + static_cast<std::size_t>(o) * n;
                        double acc = 0.0;
                        for (int i = 0; i < n; ++i) acc += row[i];
                        db[o] += static_cast<T>(acc);
                      }
                    }
                    if (g.requires_grad(weight)) {
                      std::vector<T>& col = Scratch<T>(0);
                      col.resize(static_cast<std::size_t>(k) * n);
                      Im2Col(in.data(), cin, h, w, col.data());
                      MapMat<T>(g.GradRef(weight).data(), cout, k).noalias() +=
                          dym * ConstMapMat<T>(col.data(), k, n).transpose();
                    }
                    if (g.requires_grad(x)) {
                      std::vector<T>& dcol = Scratch<T>(1);
                      dcol.resize(static_cast<std::size_t>(k) * n);
                      MapMat<T>(dcol.data(), k, n).noalias() =
                          ConstMapMat<T>(wt.data(), cout, k).transpose() * dym;
                      Col2ImAdd(dcol.data(), cin, h, w, g.GradRef(x).data());
                    }
                  });
}

template <typename T>
Var Prelu(Graph<T>& g, Var x, Var slope) {
  const Tensor<T>& in = g.value(x);
  const Tensor<T>& a = g.value(slope);
  Require(a.size() == static_cast<std::size_t>(in.channels()),
          "prelu: slope count mismatch");
  Tensor<T> out(in.channels(), in.height(), in.width());
  const std::size_t hw = in.plane_size();
  for (int c = 0; c < in.channels(); ++c) {
    const T* src = in.channel(c);
    T* dst = out.channel(c);
    const T s = a[c];
    for (std::size_t i = 0; i < hw; ++i) {
      dst[i] = src[i] > T(0) ? src[i] : s * src[i];
    }
  }
  return g.Record(std::move(out), {x, slope},
                  [x, slope](Graph<T>& g, int node) {
                    const Tensor<T>& in = g.value(x);
                    const Tensor<T>& a = g.value(slope);
                    const Tensor<T>& dy = g.OutputGrad(node);
                    const std::size_t hw = in.plane_size();
                    const bool need_x = g.requires_grad(x);
                    const bool need_a = g.requires_grad(slope);
                    Tensor<T>* dx = need_x ? &g.GradRef(x) : nullptr;
                    Tensor<T>* da = need_a ? &g.GradRef(slope) : nullptr;
                    for (int c = 0; c < in.channels(); ++c) {
                      const T* src = in.channel(c);
                      const T* gy = dy.channel(c);
                      T acc = T(0);
                      for (std::size_t i = 0; i < hw; ++i) {
                        if (src[i] > T(0)) {
                          if (dx) dx->channel(c)[i] += gy[i];
                        } else {
                          if (dx) dx->channel(c)[i] += a[c] * gy[i];
                          acc += gy[i] * src[i];
                        }
                      }
                      if (da) (*da)[c] += acc;
                    }
                  });
}

template <typename T>
Var Add(Graph<T>& g, Var a, Var b) {
  const Tensor<T>& ta = g.value(a);
  const Tensor<T>& tb = g.value(b);
  Require(ta.SameShape(tb), "add: shape mismatch " + ta.ShapeString() + " vs " +
                                tb.ShapeString());
  Tensor<T> out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += tb[i];
  return g.Record(std::move(out), {a, b}, [a, b](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    for (Var v : {a, b}) {
      if (!g.requires_grad(v)) continue;
      Tensor<T>& d = g.GradRef(v);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += dy[i];
    }
  });
}

template <typename T>
Var Sub(Graph<T>& g, Var a, Var b) {
  const Tensor<T>& ta = g.value(a);
  const Tensor<T>& tb = g.value(b);
  Require(ta.SameShape(tb), "sub: shape mismatch");
  Tensor<T> out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= tb[i];
  return g.Record(std::move(out), {a, b}, [a, b](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    if (g.requires_grad(a)) {
      Tensor<T>& d = g.GradRef(a);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += dy[i];
    }
    if (g.requires_grad(b)) {
      Tensor<T>& d = g.GradRef(b);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= dy[i];
    }
  });
}

template <typename T>
Var Scale(Graph<T>& g, Var x, T factor) {
  Tensor<T> out = g.value(x);
  for (T& v : out.values()) v *= factor;
  return g.Record(std::move(out), {x}, [x, factor](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    Tensor<T>& d = g.GradRef(x);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += factor * dy[i];
  });
}

template <typename T>
Var Concat(Graph<T>& g, const std::vector<Var>& parts) {
  Require(!parts.empty(), "concat: no inputs");
  const Tensor<T>& first = g.value(parts.front());
  int channels = 0;
  for (Var p : parts) {
    const Tensor<T>& t = g.value(p);
    Require(t.height() == first.height() && t.width() == first.width(),
            "concat: spatial size mismatch");
    channels += t.channels();
  }
  Tensor<T> out(channels, first.height(), first.width());
  T* dst = out.data();
  for (Var p : parts) {
    const Tensor<T>& t = g.value(p);
    dst = std::copy(t.data(), t.data() + t.size(), dst);
  }
  return g.Record(std::move(out), parts, [parts](Graph<T>& g, int node) {
    const T* src = g.OutputGrad(node).data();
    for (Var p : parts) {
      const std::size_t n = g.value(p).size();
      if (g.requires_grad(p)) {
        Tensor<T>& d = g.GradRef(p);
        for (std::size_t i = 0; i < n; ++i) d[i] += src[i];
      }
      src += n;
    }
  });
}

template <typename T>
Var SliceChannels(Graph<T>& g, Var x, int begin, int count) {
  const Tensor<T>& in = g.value(x);
  Require(begin >= 0 && count > 0 && begin + count <= in.channels(),
          "slice: channel range out of bounds");
  Tensor<T> out(count, in.height(), in.width());
  std::copy(in.channel(begin), in.channel(begin) + out.size(), out.data());
  return g.Record(std::move(out), {x}, [x, begin](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    T* d = g.GradRef(x).channel(begin);
    for (std::size_t i = 0; i < dy.size(); ++i) d[i] += dy[i];
  });
}

template <typename T>
Var AvgPool2(Graph<T>& g, Var x) {
  const Tensor<T>& in = g.value(x);
  Require(in.height() % 2 == 0 && in.width() % 2 == 0,
          "avgpool2: odd spatial size " + in.ShapeString());
  const int oh = in.height() / 2;
  const int ow = in.width() / 2;
  Tensor<T> out(in.channels(), oh, ow);
  for (int c = 0; c < in.channels(); ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int xx = 0; xx < ow; ++xx) {
        out.at(c, y, xx) =
            T(0.25) *
            (in.at(c, 2 * y, 2 * xx) + in.at(c, 2 * y, 2 * xx + 1) +
             in.at(c, 2 * y + 1, 2 * xx) + in.at(c, 2 * y + 1, 2 * xx + 1));
      }
    }
  }
  return g.Record(std::move(out), {x}, [x](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    Tensor<T>& d = g.GradRef(x);
    for (int c = 0; c < dy.channels(); ++c) {
      for (int y = 0; y < dy.height(); ++y) {
        for (int xx = 0; xx < dy.width(); ++xx) {
          const T v = T(0.25) * dy.at(c, y, xx);
          d.at(c, 2 * y, 2 * xx) += v;
          d.at(c, 2 * y, 2 * xx + 1) += v;
          d.at(c, 2 * y + 1, 2 * xx) += v;
          d.at(c, 2 * y + 1, 2 * xx + 1) += v;
        }
      }
    }
  });
}

template <typename T>
Var Upsample2(Graph<T>& g, Var x) {
  const Tensor<T>& in = g.value(x);
  const int h = in.height();
  const int w = in.width();
  auto taps = [](int out_n, int in_n) {
    std::vector<Tap> t(out_n);
    for (int i = 0; i < out_n; ++i) t[i] = MakeTap((i + 0.5) / 2.0 - 0.5, in_n);
    return t;
  };
  const std::vector<Tap> ty = taps(2 * h, h);
  const std::vector<Tap> tx = taps(2 * w, w);
  Tensor<T> out(in.channels(), 2 * h, 2 * w);
  for (int c = 0; c < in.channels(); ++c) {
    for (int y = 0; y < 2 * h; ++y) {
      const Tap& a = ty[y];
      for (int xx = 0; xx < 2 * w; ++xx) {
        const Tap& b = tx[xx];
        const double top =
            (1 - b.f) * in.at(c, a.i0, b.i0) + b.f * in.at(c, a.i0, b.i1);
        const double bot =
            (1 - b.f) * in.at(c, a.i1, b.i0) + b.f * in.at(c, a.i1, b.i1);
        out.at(c, y, xx) = static_cast<T>((1 - a.f) * top + a.f * bot);
      }
    }
  }
  return g.Record(std::move(out), {x}, [x, ty, tx](Graph<T>& g, int node) {
    const Tensor<T>& dy = g.OutputGrad(node);
    Tensor<T>& d = g.GradRef(x);
    for (int c = 0; c < dy.channels(); ++c) {
      for (int y = 0; y < dy.height(); ++y) {
        const Tap& a = ty[y];
        for (int xx = 0; xx < dy.width(); ++xx) {
          const Tap& b = tx[xx];
          const double v = dy.at(c, y, xx);
          d.at(c, a.i0, b.i0) += static_cast<T>(v * (1 - a.f) * (1 - b.f));
          d.at(c, a.i0, b.i1) += static_cast<T>(v * (1 - a.f) * b.f);
          d.at(c, a.i1, b.i0) += static_cast<T>(v * a.f * (1 - b.f));
          d.at(c, a.i1, b.i1) += static_cast<T>(v * a.f * b.f);
        }
      }
    }
  });
}

template <typename T>
Var Warp(Graph<T>& g, Var src, Var flow) {
  const Tensor<T>& s = g.value(src);
  const Tensor<T>& f = g.value(flow);
  Require(
      f.channels() == 2 && f.height() == s.height() && f.width() == s.width(),
      "warp: flow " + f.ShapeString() + " does not match source " +
          s.ShapeString());
  const int h = s.height();
  const int w = s.width();
  Tensor<T> out(s.channels(), h, w);
  for (int y = 0; y < h; ++y) {
    for (int xx = 0; xx < w; ++xx) {
      const Tap tx = MakeTap(xx + static_cast<double>(f.at(0, y, xx)), w);
      const Tap ty = MakeTap(y + static_cast<double>(f.at(1, y, xx)), h);
      for (int c = 0; c < s.channels(); ++c) {
        const double top =
            (1 - tx.f) * s.at(c, ty.i0, tx.i0) + tx.f * s.at(c, ty.i0, tx.i1);
        const double bot =
            (1 - tx.f) * s.at(c, ty.i1, tx.i0) + tx.f * s.at(c, ty.i1, tx.i1);
        out.at(c, y, xx) = static_cast<T>((1 - ty.f) * top + ty.f * bot);
      }
    }
  }
  return g.Record(
      std::move(out), {src, flow}, [src, flow](Graph<T>& g, int node) {
        const Tensor<T>& s = g.value(src);
        const Tensor<T>& f = g.value(flow);
        const Tensor<T>& dy = g.OutputGrad(node);
        const int h = s.height();
        const int w = s.width();
        Tensor<T>* ds = g.requires_grad(src) ? &g.GradRef(src) : nullptr;
        Tensor<T>* df = g.requires_grad(flow) ? &g.GradRef(flow) : nullptr;
        for (int y = 0; y < h; ++y) {
          for (int xx = 0; xx < w; ++xx) {
            const Tap tx = MakeTap(xx + static_cast<double>(f.at(0, y, xx)), w);
            const Tap ty = MakeTap(y + static_cast<double>(f.at(1, y, xx)), h);
            double gx = 0.0;
            double gy = 0.0;
            for (int c = 0; c < s.channels(); ++c) {
              const double v = dy.at(c, y, xx);
              const double s00 = s.at(c, ty.i0, tx.i0);
              const double s01 = s.at(c, ty.i0, tx.i1);
              const double s10 = s.at(c, ty.i1, tx.i0);
              const double s11 = s.at(c, ty.i1, tx.i1);
              if (ds) {
                ds->at(c, ty.i0, tx.i0) +=
                    static_cast<T>(v * (1 - ty.f) * (1 - tx.f));
                ds->at(c, ty.i0, tx.i1) +=
                    static_cast<T>(v * (1 - ty.f) * tx.f);
                ds->at(c, ty.i1, tx.i0) +=
                    static_cast<T>(v * ty.f * (1 - tx.f));
                ds->at(c, ty.i1, tx.i1) += static_cast<T>(v * ty.f * tx.f);
              }
              gx += v * ((1 - ty.f) * (s01 - s00) + ty.f * (s11 - s10));
              gy += v * ((1 - tx.f) * (s10 - s00) + tx.f * (s11 - s01));
            }
            if (df) {
              if (tx.inside) df->at(0, y, xx) += static_cast<T>(gx);
              if (ty.inside) df->at(1, y, xx) += static_cast<T>(gy);
            }
          }
        }
      });
}

template <typename T>
Var GuidedConv3x3(Graph<T>& g, Var input, Var intermediate, Var weight,
                  Var bias) {
  const Tensor<T>& in = g.value(input);
  const Tensor<T>& mid = g.value(intermediate);
  const Tensor<T>& wt = g.value(weight);
  const Tensor<T>& b = g.value(bias);
  const int pi = in.channels();
  const int po = mid.channels();
  Require(mid.height() == in.height() && mid.width() == in.width(),
          "guided conv: intermediate maps must match the input size");
  Require(wt.channels() == po && wt.height() == pi && wt.width() == 9,
          "guided conv: weight " + wt.ShapeString() + " expected " +
              std::to_string(po) + "x" + std::to_string(pi) + "x9");
  Require(b.size() == static_cast<std::size_t>(po),
          "guided conv: bias size mismatch");
  const int h = in.height();
  const int w = in.width();
  const std::size_t hw = in.plane_size();
  Tensor<T> out(po, h, w);
  std::vector<T> prod(hw);
  for (int l = 0; l < po; ++l) {
    T* o = out.channel(l);
    std::fill(o, o + hw, b[l]);
    for (int j = 0; j < pi; ++j) {
      const T* m = mid.channel(l);
      const T* f = in.channel(j);
      for (std::size_t i = 0; i < hw; ++i) prod[i] = m[i] * f[i];
      for (int k = 0; k < 9; ++k) {
        const int dy = k / 3 - 1;
        const int dx = k % 3 - 1;
        const T wk = wt.at(l, j, k);
        const int x0 = std::max(0, -dx);
        const int x1 = std::min(w, w - dx);
        for (int y = std::max(0, -dy); y < std::min(h, h - dy); ++y) {
          T* orow = o + static_cast<std::size_t>(y) * w;
          const T* prow =
              prod.data() + static_cast<std::size_t>(y + dy) * w + dx;
          for (int xx = x0; xx < x1; ++xx) orow[xx] += wk * prow[xx];
        }
      }
    }
  }
  return g.Record(
      std::move(out), {input, intermediate, weight, bias},
      [input, intermediate, weight, bias](Graph<T>& g, int node) {
        const Tensor<T>& in = g.value(input);
        const Tensor<T>& mid = g.value(intermediate);
        const Tensor<T>& wt = g.value(weight);
        const Tensor<T>& dy = g.OutputGrad(node);
        const int pi = in.channels();
        const int po = mid.channels();
        const int h = in.height();
        const int w = in.width();
        const std::size_t hw = in.plane_size();
        Tensor<T>* din = g.requires_grad(input) ? &g.GradRef(input) : nullptr;
        Tensor<T>* dmid =
            g.requires_grad(intermediate) ? &g.GradRef(intermediate) : nullptr;
        Tensor<T>* dw = g.requires_grad(weight) ? &g.GradRef(weight) : nullptr;
        if (g.requires_grad(bias)) {
          Tensor<T>& db = g.GradRef(bias);
          for (int l = 0; l < po; ++l) {
            const T* gy = dy.channel(l);
            double acc = 0.0;
            for (std::size_t i = 0; i < hw; ++i) acc += gy[i];
            db[l] += static_cast<T>(acc);
          }
        }
        std::vector<T> prod(hw);
        std::vector<T> dprod(hw);
        for (int l = 0; l < po; ++l) {
          const T* gy = dy.channel(l);
          const T* m = mid.channel(l);
          for (int j = 0; j < pi; ++j) {
            const T* f = in.channel(j);
            for (std::size_t i = 0; i < hw; ++i) prod[i] = m[i] * f[i];
            std::fill(dprod.begin(), dprod.end(), T(0));
            for (int k = 0; k < 9; ++k) {
              const int ky = k / 3 - 1;
              const int kx = k % 3 - 1;
              const T wk = wt.at(l, j, k);
              const int x0 = std::max(0, -kx);
              const int x1 = std::min(w, w - kx);
              double wacc = 0.0;
              for (int y = std::max(0, -ky); y < std::min(h, h - ky); ++y) {
                const T* grow = gy + static_cast<std::size_t>(y) * w;
                const std::size_t shift =
                    static_cast<std::size_t>(y + ky) * w + kx;
                const T* prow = prod.data() + shift;
                T* drow = dprod.data() + shift;
                for (int xx = x0; xx < x1; ++xx) {
                  wacc += static_cast<double>(grow[xx]) * prow[xx];
                  drow[xx] += wk * grow[xx];
                }
              }
              if (dw) dw->at(l, j, k) += static_cast<T>(wacc);
            }
            if (din) {
              T* d = din->channel(j);
              for (std::size_t i = 0; i < hw; ++i) d[i] += dprod[i] * m[i];
            }
            if (dmid) {
              T* d = dmid->channel(l);
              for (std::size_t i = 0; i < hw; ++i) d[i] += dprod[i] * f[i];
            }
          }
        }
      });
}

template <typename T>
Var Clamp(Graph<T>& g, Var x, T lo, T hi) {
  Tensor<T> out = g.value(x);
  for (T& v : out.values()) v = std::clamp(v, lo, hi);
  return g.Record(std::move(out), {x}, [x, lo, hi](Graph<T>& g, int node) {
    const Tensor<T>& in = g.value(x);
    const Tensor<T>& dy = g.OutputGrad(node);
    Tensor<T>& d = g.GradRef(x);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (in[i] >= lo && in[i] <= hi) d[i] += dy[i];
    }
  });
}

template <typename T>
Var SumSquaredDiff(Graph<T>& g, Var a, Var b) {
  const Tensor<T>& ta = g.value(a);
  const Tensor<T>& tb = g.value(b);
  Require(ta.SameShape(tb), "sum squared diff: shape mismatch " +
                                ta.ShapeString() + " vs " + tb.ShapeString());
  double acc = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const double d = static_cast<double>(ta[i]) - tb[i];
    acc += d * d;
  }
  return g.Record(Tensor<T>(1, 1, 1, static_cast<T>(acc)), {a, b},
                  [a, b](Graph<T>& g, int node) {
                    const Tensor<T>& ta = g.value(a);
                    const Tensor<T>& tb = g.value(b);
                    const T s = T(2) * g.OutputGrad(node)[0];
                    if (g.requires_grad(a)) {
                      Tensor<T>& d = g.GradRef(a);
                      for (std::size_t i = 0; i < d.size(); ++i)
                        d[i] += s * (ta[i] - tb[i]);
                    }
                    if (g.requires_grad(b)) {
                      Tensor<T>& d = g.GradRef(b);
                      for (std::size_t i = 0; i < d.size(); ++i)
                        d[i] -= s * (ta[i] - tb[i]);
                    }
                  });
}

template <typename T>
Var LinearCombination(Graph<T>& g, const std::vector<Var>& terms,
                      const std::vector<T>& coeffs) {
  Require(terms.size() == coeffs.size() && !terms.empty(),
          "linear combination: terms/coefficients mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Require(g.value(terms[i]).size() == 1, "linear combination: non-scalar");
    acc += static_cast<double>(coeffs[i]) * g.value(terms[i])[0];
  }
  return g.Record(Tensor<T>(1, 1, 1, static_cast<T>(acc)), terms,
                  [terms, coeffs](Graph<T>& g, int node) {
                    const T dy = g.OutputGrad(node)[0];
                    for (std::size_t i = 0; i < terms.size(); ++i) {
                      if (g.requires_grad(terms[i]))
                        g.GradRef(terms[i])[0] += coeffs[i] * dy;
                    }
                  });
}

#define MIF_INSTANTIATE_OPS(T)                                          \
  template Var Conv3x3<T>(Graph<T>&, Var, Var, Var);                    \
  template Var Prelu<T>(Graph<T>&, Var, Var);                           \
  template Var Add<T>(Graph<T>&, Var, Var);                             \
  template Var Sub<T>(Graph<T>&, Var, Var);                             \
  template Var Scale<T>(Graph<T>&, Var, T);                             \
  template Var Concat<T>(Graph<T>&, const std::vector<Var>&);           \
  template Var SliceChannels<T>(Graph<T>&, Var, int, int);              \
  template Var AvgPool2<T>(Graph<T>&, Var);                             \
  template Var Upsample2<T>(Graph<T>&, Var);                            \
  template Var Warp<T>(Graph<T>&, Var, Var);                            \
  template Var GuidedConv3x3<T>(Graph<T>&, Var, Var, Var, Var);         \
  template Var Clamp<T>(Graph<T>&, Var, T, T);                          \
  template Var SumSquaredDiff<T>(Graph<T>&, Var, Var);                  \
  template Var LinearCombination<T>(Graph<T>&, const std::vector<Var>&, \
                                    const std::vector<T>&);

MIF_INSTANTIATE_OPS(float)
MIF_INSTANTIATE_OPS(double)

#undef MIF_INSTANTIATE_OPS

}  // namespace mif::nn
