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

#include "mif/metrics.h"

#include <algorithm>
#include <cmath>

#include "mif/error.h"

namespace mif {
namespace {

void RequireSameShape(const Plane& a, const Plane& b, const char* op) {
  if (!a.SameShape(b)) {
    throw ValidationError(
        std::string(op) + ": shape mismatch " + std::to_string(a.width()) +
        "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
        "x" + std::to_string(b.height()));
  }
}

}  // namespace

double MeanSquaredError(const Plane& a, const Plane& b) {
  RequireSameShape(a, b, "mse");
  if (a.empty()) throw ValidationError("mse: empty planes");
  double sum = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double Psnr(const Plane& a, const Plane& b, double peak) {
  if (!(peak > 0.0)) throw ValidationError("psnr: peak must be positive");
  const double mse = MeanSquaredError(a, b);
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

std::array<double, 3> DeltaPsnrChannels(const Frame& pool,
                                        const Frame& raw_pool, const Frame& urf,
                                        const Frame& raw_urf) {
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = Psnr(pool.channel(c), raw_pool.channel(c)) -
             Psnr(urf.channel(c), raw_urf.channel(c));
  }
  return out;
}

double CorrelationCoefficient(const Plane& a, const Plane& b) {
  RequireSameShape(a, b, "correlation");
  if (a.size() < 2) throw ValidationError("correlation: need >= 2 samples");
  // Single-pass co-moment accumulation.
  double mean_a = 0.0, mean_b = 0.0, m2a = 0.0, m2b = 0.0, cab = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double da = pa[i] - mean_a;
    const double db = pb[i] - mean_b;
    mean_a += da / n;
    mean_b += db / n;
    m2a += da * (pa[i] - mean_a);
    m2b += db * (pb[i] - mean_b);
    cab += da * (pb[i] - mean_b);
  }
  if (m2a <= 0.0 || m2b <= 0.0) return 0.0;
  return std::clamp(cab / std::sqrt(m2a * m2b), -1.0, 1.0);
}

NormalizedBatch Zscore(std::span<const double> values) {
  if (values.empty()) throw ValidationError("zscore: empty input");
  NormalizedBatch out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(values.size()));
  const double denom = std::max(out.std, kZscoreStdFloor);
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back((v - out.mean) / denom);
  return out;
}

}  // namespace mif

namespace mif {
namespace {

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("spearman: length mismatch");
  }
  if (a.size() < 2) return 0.0;
  const std::vector<double> ra = AverageRanks(a);
  const std::vector<double> rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace mif
