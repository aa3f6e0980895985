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

#include "mif/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "mif/error.h"

namespace mif {
namespace {

double Smooth(double t) { return t * t * (3.0 - 2.0 * t); }

// Value noise with lattice spacing `cell`.
void AddValueNoise(Plane& p, int cell, double amplitude, std::mt19937_64& rng) {
  const int gw = p.width() / cell + 2;
  const int gh = p.height() / cell + 2;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
  for (double& g : grid) g = u(rng);
  for (int y = 0; y < p.height(); ++y) {
    const int gy = y / cell;
    const double ty = Smooth(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < p.width(); ++x) {
      const int gx = x / cell;
      const double tx = Smooth(static_cast<double>(x % cell) / cell);
      const double a = grid[gy * gw + gx];
      const double b = grid[gy * gw + gx + 1];
      const double c = grid[(gy + 1) * gw + gx];
      const double d = grid[(gy + 1) * gw + gx + 1];
      const double top = a + (b - a) * tx;
      const double bottom = c + (d - c) * tx;
      p.at(x, y) += amplitude * (top + (bottom - top) * ty);
    }
  }
}

void AddShapes(Plane& p, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    const double cx = u(rng) * p.width();
    const double cy = u(rng) * p.height();
    const double rx = 4.0 + u(rng) * p.width() / 6.0;
    const double ry = 4.0 + u(rng) * p.height() / 6.0;
    const double level = u(rng) - 0.5;
    const bool disc = u(rng) < 0.5;
    const int x0 = std::max(0, static_cast<int>(cx - rx));
    const int x1 = std::min(p.width(), static_cast<int>(cx + rx) + 1);
    const int y0 = std::max(0, static_cast<int>(cy - ry));
    const int y1 = std::min(p.height(), static_cast<int>(cy + ry) + 1);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        if (!disc || dx * dx + dy * dy <= 1.0) p.at(x, y) += 0.6 * level;
      }
    }
  }
}

void Normalize(Plane& p, double lo, double hi) {
  const auto [mn, mx] = std::minmax_element(p.data(), p.data() + p.size());
  const double a = *mn;
  const double range = std::max(*mx - a, 1e-12);
  for (double& v : p.samples()) v = lo + (hi - lo) * (v - a) / range;
}

Plane SmoothField(int width, int height, double lo, double hi,
                  std::mt19937_64& rng) {
  Plane p(width, height);
  AddValueNoise(p, 32, 1.0, rng);
  AddValueNoise(p, 16, 0.4, rng);
  Normalize(p, lo, hi);
  return p;
}

}  // namespace

Plane NaturalImage(int width, int height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("natural image: size must be positive");
  }
  std::mt19937_64 rng(seed);
  Plane p(width, height);
  double amplitude = 1.0;
  for (int cell = 64; cell >= 2; cell /= 2) {
    AddValueNoise(p, cell, amplitude, rng);
    amplitude *= 0.55;
  }
  AddShapes(p, std::max(6, width * height / 2048), rng);
  Normalize(p, 0.05, 0.95);
  return p;
}

double SampleBilinear(const Plane& p, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(p.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(p.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, p.width() - 1);
  const int y1 = std::min(y0 + 1, p.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = p.at(x0, y0) + (p.at(x1, y0) - p.at(x0, y0)) * fx;
  const double bottom = p.at(x0, y1) + (p.at(x1, y1) - p.at(x0, y1)) * fx;
  return top + (bottom - top) * fy;
}

std::vector<Frame> SyntheticClip(const ClipOptions& o) {
  if (o.width <= 0 || o.height <= 0 || o.width % 2 || o.height % 2 ||
      o.frames <= 0) {
    throw ValidationError("synthetic clip: invalid size or frame count");
  }
  std::mt19937_64 rng(o.seed);
  double vx = o.velocity_x;
  double vy = o.velocity_y;
  if (o.random_motion) {
    std::uniform_real_distribution<double> speed(-o.max_speed, o.max_speed);
    vx = speed(rng);
    vy = speed(rng);
  }
  const int margin = static_cast<int>(std::ceil(
                         std::max(std::abs(vx), std::abs(vy)) * o.frames)) +
                     4;
  const int cw = o.width + 2 * margin;
  const int ch = o.height + 2 * margin;
  const Plane luma = NaturalImage(cw, ch, rng());
  const Plane cb = SmoothField(cw / 2 + 1, ch / 2 + 1, 0.35, 0.65, rng);
  const Plane cr = SmoothField(cw / 2 + 1, ch / 2 + 1, 0.35, 0.65, rng);

  std::vector<Frame> frames;
  for (int t = 0; t < o.frames; ++t) {
    const double ox = margin + vx * t;
    const double oy = margin + vy * t;
    Frame f = Frame::Blank(o.width, o.height, FrameRole::kRaw, t);
    for (int y = 0; y < o.height; ++y) {
      for (int x = 0; x < o.width; ++x) {
        f.y.at(x, y) =
            std::round(SampleBilinear(luma, ox + x, oy + y) * 255.0) / 255.0;
      }
    }
    for (int y = 0; y < o.height / 2; ++y) {
      for (int x = 0; x < o.width / 2; ++x) {
        const double sx = 0.5 * ox + x;
        const double sy = 0.5 * oy + y;
        f.u.at(x, y) = std::round(SampleBilinear(cb, sx, sy) * 255.0) / 255.0;
        f.v.at(x, y) = std::round(SampleBilinear(cr, sx, sy) * 255.0) / 255.0;
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace mif
