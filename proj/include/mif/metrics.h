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

#ifndef MIF_METRICS_H_
#define MIF_METRICS_H_

#include <array>
#include <span>
#include <vector>

#include "mif/frame.h"

namespace mif {

// PSNR reported for a zero-error pair; also the upper clamp for any pair.
inline constexpr double kPsnrCap = 100.0;

double MeanSquaredError(const Plane& a, const Plane& b);

// 10 log10(peak^2 / MSE), clamped to kPsnrCap.
double Psnr(const Plane& a, const Plane& b, double peak = 1.0);

// Y/U/V PSNR increment of a pool frame over a URF, each measured against its
// own raw frame: PSNR(pool, raw_pool) - PSNR(urf, raw_urf).
std::array<double, 3> DeltaPsnrChannels(const Frame& pool,
                                        const Frame& raw_pool, const Frame& urf,
                                        const Frame& raw_urf);

// Pearson correlation of co-located samples; 0 when either plane is
// constant.
double CorrelationCoefficient(const Plane& a, const Plane& b);

inline constexpr double kZscoreStdFloor = 1e-6;

struct NormalizedBatch {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation, before flooring
};

// (v - mean) / max(std, kZscoreStdFloor) with the population std.
NormalizedBatch Zscore(std::span<const double> values);

// Rank correlation with tied values sharing their average rank. Returns 0
// when either input is constant.
double SpearmanCorrelation(std::span<const double> a,
                           std::span<const double> b);

}  // namespace mif

#endif  // MIF_METRICS_H_
