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

#include "mif/proxy_codec.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "mif/dct.h"
#include "mif/error.h"

namespace mif {
namespace {

constexpr int kTreeUnit = 64;
constexpr int kMinCu = 8;

double BlockVariance(const Plane& p, const Rect& r) {
  double sum = 0.0, sq = 0.0;
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const double v = p.at(x, y);
      sum += v;
      sq += v * v;
    }
  }
  const double n = static_cast<double>(r.w) * r.h;
  const double mean = sum / n;
  return std::max(0.0, sq / n - mean * mean);
}

void SplitNode(const Plane& luma, int x, int y, int size, std::mt19937_64& rng,
               double split_variance, std::vector<Rect>& out) {
  if (x >= luma.width() || y >= luma.height()) return;
  const bool fits = x + size <= luma.width() && y + size <= luma.height();
  bool split = !fits;
  if (fits && size > kMinCu) {
    const double var = BlockVariance(luma, {x, y, size, size});
    const double p = var / (var + split_variance);
    split = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  }
  if (!split || size == kMinCu) {
    out.push_back({x, y, size, size});
    return;
  }
  const int half = size / 2;
  SplitNode(luma, x, y, half, rng, split_variance, out);
  SplitNode(luma, x + half, y, half, rng, split_variance, out);
  SplitNode(luma, x, y + half, half, rng, split_variance, out);
  SplitNode(luma, x + half, y + half, half, rng, split_variance, out);
}

std::uint64_t FrameSeed(std::uint64_t seed, int frame) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(frame)};
  std::uint64_t out;
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

}  // namespace

void ProxyCodecConfig::Validate() const {
  if (gop_size < 1) throw ConfigError("gop_size must be at least 1");
  if (static_cast<int>(qp_offsets.size()) != gop_size) {
    throw ConfigError("qp_offsets needs exactly gop_size entries");
  }
  for (int f = 0; f < gop_size; ++f) {
    const int qp = qp_base + qp_offsets[f];
    if (qp < 0 || qp > 63) {
      throw ConfigError("effective qp " + std::to_string(qp) +
                        " outside [0,63]");
    }
  }
  if (transform_size != 8) throw ConfigError("transform_size must be 8");
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
  if (!(split_variance > 0.0)) {
    throw ConfigError("split_variance must be positive");
  }
}

int ProxyCodecConfig::QpForFrame(int frame) const {
  return qp_base + qp_offsets[frame % gop_size];
}

double QuantStep(int qp) { return std::pow(2.0, (qp - 4) / 6.0) / 255.0; }

BlockLayout QuadtreeLayout(const Plane& luma, std::uint64_t seed,
                           double split_variance) {
  std::mt19937_64 rng(seed);
  BlockLayout layout;
  for (int y = 0; y < luma.height(); y += kTreeUnit) {
    for (int x = 0; x < luma.width(); x += kTreeUnit) {
      SplitNode(luma, x, y, kTreeUnit, rng, split_variance, layout.cu);
    }
  }
  for (const Rect& cu : layout.cu) {
    const int h = cu.w / 2;
    layout.tu.push_back({cu.x, cu.y, h, h});
    layout.tu.push_back({cu.x + h, cu.y, h, h});
    layout.tu.push_back({cu.x, cu.y + h, h, h});
    layout.tu.push_back({cu.x + h, cu.y + h, h, h});
  }
  return layout;
}

Plane QuantizePlane(const Plane& plane, int n, double step, long& nonzero) {
  if (plane.width() % n != 0 || plane.height() % n != 0) {
    throw ValidationError("plane " + std::to_string(plane.width()) + "x" +
                          std::to_string(plane.height()) +
                          " is not a multiple of the " + std::to_string(n) +
                          "-point transform");
  }
  Plane out(plane.width(), plane.height());
  std::vector<double> block(static_cast<std::size_t>(n) * n);
  for (int by = 0; by < plane.height(); by += n) {
    for (int bx = 0; bx < plane.width(); bx += n) {
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) block[y * n + x] = plane.at(bx + x, by + y);
      }
      ForwardDct2d(block, n);
      for (double& c : block) {
        const double level = std::round(c / step);
        if (level != 0.0) ++nonzero;
        c = level * step;
      }
      InverseDct2d(block, n);
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double v = std::clamp(block[y * n + x], 0.0, 1.0);
          out.at(bx + x, by + y) = std::round(v * 255.0) / 255.0;
        }
      }
    }
  }
  return out;
}

CodedSequence ProxyEncodeResult::ToCodedSequence(
    const std::vector<Frame>& raw) const {
  CodedSequence seq{raw, urfs, maps};
  seq.Validate();
  return seq;
}

ProxyEncodeResult ProxyEncode(const std::vector<Frame>& raw,
                              const ProxyCodecConfig& config) {
  config.Validate();
  if (raw.empty()) throw ValidationError("proxy encode: no frames");
  ProxyEncodeResult result;
  long total_nonzero = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Frame& f = raw[i];
    f.Validate();
    if (f.width() % 8 != 0 || f.height() % 8 != 0) {
      throw ValidationError("frame size " + std::to_string(f.width()) + "x" +
                            std::to_string(f.height()) +
                            " is not a multiple of 8");
    }
    ProxyFrameStats stats;
    stats.qp = config.QpForFrame(static_cast<int>(i));
    const double step = QuantStep(stats.qp);
    Frame urf = Frame::Blank(f.width(), f.height(), FrameRole::kUrf, f.index);
    urf.qp = stats.qp;
    urf.y = QuantizePlane(f.y, config.transform_size, step,
                          stats.nonzero_coefficients);
    urf.u = QuantizePlane(f.u, config.transform_size / 2, step,
                          stats.nonzero_coefficients);
    urf.v = QuantizePlane(f.v, config.transform_size / 2, step,
                          stats.nonzero_coefficients);
    BlockLayout layout =
        QuadtreeLayout(f.y, FrameSeed(config.seed, static_cast<int>(i)),
                       config.split_variance);
    result.maps.push_back(RasterizePartition(layout, f.width(), f.height()));
    result.layouts.push_back(std::move(layout));
    result.urfs.push_back(std::move(urf));
    total_nonzero += stats.nonzero_coefficients;
    result.stats.push_back(stats);
  }
  result.bitrate = static_cast<double>(total_nonzero) * config.fps /
                   static_cast<double>(raw.size());
  return result;
}

}  // namespace mif
