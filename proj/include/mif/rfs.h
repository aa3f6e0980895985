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

#ifndef MIF_RFS_H_
#define MIF_RFS_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "mif/frame.h"

namespace mif {

struct RfsConfig {
  int pool_size = 16;         // N
  double cc_threshold = 0.3;  // tau
  int num_selected = 2;       // M

  void Validate() const;
};

inline constexpr int kRfsFeatures = 6;
inline constexpr int kRfsHidden = 12;

struct RfsRecord {
  int pool_index = 0;
  int target_index = 0;
  std::array<double, 3> d_psnr{};  // Y, U, V
  std::array<double, 3> cc{};      // Y, U, V
  bool valid = false;
  std::optional<double> potential_gt;
  std::optional<double> potential_pred;

  // (dPSNR_Y, dPSNR_U, dPSNR_V, CC_Y, CC_U, CC_V)
  std::array<double, kRfsFeatures> Features() const;
};

// A pool frame is a valid reference when some channel has a positive PSNR
// increment together with a correlation above tau.
bool IsValidReference(const std::array<double, 3>& d_psnr,
                      const std::array<double, 3>& cc, double tau);

// Frame with index k in a sequence of raw frames. Throws ValidationError
// when no such frame exists.
const Frame& RawAt(std::span<const Frame> raws, int index);

// One record per pool frame (at most the most recent config.pool_size are
// considered). raws must contain every pool index and urf.index.
std::vector<RfsRecord> ComputeRfsMetrics(const Frame& urf,
                                         std::span<const Frame> pool,
                                         std::span<const Frame> raws,
                                         const RfsConfig& config);

// Two fully connected layers 6 -> 12 -> 1, each followed by a PReLU with a
// single learnable slope.
struct RfsNetParams {
  std::array<double, kRfsHidden * kRfsFeatures> w1{};  // row-major 12x6
  std::array<double, kRfsHidden> b1{};
  double slope1 = 0.25;
  std::array<double, kRfsHidden> w2{};
  double b2 = 0.0;
  double slope2 = 0.25;

  static constexpr std::size_t kCount =
      kRfsHidden * kRfsFeatures + kRfsHidden + 1 + kRfsHidden + 2;

  static RfsNetParams Initialize(std::uint64_t seed);
  std::vector<double> Flatten() const;
  static RfsNetParams Unflatten(std::span<const double> flat);
  bool AllFinite() const;
};

// Network output before batch normalization.
double RfsRawOutput(const RfsNetParams& params,
                    const std::array<double, kRfsFeatures>& features);

// Scores one batch (all valid references of one URF); outputs are Z-scored
// across the batch.
std::vector<double> RfsForward(const RfsNetParams& params,
                               std::span<const RfsRecord> records);

// sum_i (zscore(gt)_i - pred_i)^2.
double RfsLoss(std::span<const double> gt, std::span<const double> pred);

// Loss of one batch and its gradient with respect to the flattened
// parameters.
double RfsLossAndGradient(const RfsNetParams& params,
                          std::span<const std::array<double, kRfsFeatures>> x,
                          std::span<const double> gt,
                          std::vector<double>& grad);

// Pool indices of the M valid records with the highest predicted potential,
// best first; ties prefer the larger (temporally closer) pool index. Returns
// nullopt when fewer than M records are valid.
std::optional<std::vector<int>> SelectReferences(
    std::span<const RfsRecord> records, const RfsNetParams& params,
    const RfsConfig& config);

// Same ordering rule applied to precomputed scores (pool index, score).
std::vector<int> RankByScore(std::vector<std::pair<int, double>> scored,
                             int count);

// PSNR against raw_n of the pool frame's luma after block-matching
// compensation toward the URF.
double GroundTruthPotential(const Frame& pool_frame, const Frame& urf,
                            const Frame& raw_n);

}  // namespace mif

#endif  // MIF_RFS_H_
