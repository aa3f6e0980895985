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

#include "mif/rfs.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mif/block_matching.h"
#include "mif/error.h"
#include "mif/metrics.h"

namespace mif {
namespace {

double PreluValue(double z, double slope) { return z > 0.0 ? z : slope * z; }

struct RfsActivations {
  std::array<double, kRfsHidden> pre1{};
  std::array<double, kRfsHidden> hidden{};
  double pre2 = 0.0;
  double out = 0.0;
};

RfsActivations Evaluate(const RfsNetParams& p,
                        const std::array<double, kRfsFeatures>& x) {
  RfsActivations a;
  for (int k = 0; k < kRfsHidden; ++k) {
    double z = p.b1[k];
    for (int j = 0; j < kRfsFeatures; ++j)
      z += p.w1[k * kRfsFeatures + j] * x[j];
    a.pre1[k] = z;
    a.hidden[k] = PreluValue(z, p.slope1);
  }
  double z = p.b2;
  for (int k = 0; k < kRfsHidden; ++k) z += p.w2[k] * a.hidden[k];
  a.pre2 = z;
  a.out = PreluValue(z, p.slope2);
  return a;
}

// Gradient of a loss through z = (o - mean) / max(std, floor), given dL/dz.
std::vector<double> ZscoreBackward(std::span<const double> raw,
                                   std::span<const double> dz) {
  const NormalizedBatch nb = Zscore(raw);
  const double n = static_cast<double>(raw.size());
  double mean_dz = 0.0;
  for (double g : dz) mean_dz += g;
  mean_dz /= n;
  std::vector<double> d(raw.size());
  if (nb.std < kZscoreStdFloor) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = (dz[i] - mean_dz) / kZscoreStdFloor;
    }
    return d;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) dot += dz[i] * nb.values[i];
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (dz[i] - mean_dz) / nb.std - nb.values[i] * dot / (n * nb.std);
  }
  return d;
}

}  // namespace

void RfsConfig::Validate() const {
  if (num_selected < 1 || pool_size < num_selected) {
    throw ConfigError("rfs: require pool_size >= num_selected >= 1");
  }
  if (!(cc_threshold > -1.0 && cc_threshold < 1.0)) {
    throw ConfigError("rfs: cc_threshold must lie in (-1, 1)");
  }
}

std::array<double, kRfsFeatures> RfsRecord::Features() const {
  return {d_psnr[0], d_psnr[1], d_psnr[2], cc[0], cc[1], cc[2]};
}

bool IsValidReference(const std::array<double, 3>& d_psnr,
                      const std::array<double, 3>& cc, double tau) {
  for (int c = 0; c < 3; ++c) {
    if (d_psnr[c] > 0.0 && cc[c] > tau) return true;
  }
  return false;
}

const Frame& RawAt(std::span<const Frame> raws, int index) {
  if (index >= 0 && index < static_cast<int>(raws.size()) &&
      raws[index].index == index) {
    return raws[index];
  }
  for (const Frame& f : raws) {
    if (f.index == index) return f;
  }
  throw ValidationError("missing raw frame " + std::to_string(index));
}

std::vector<RfsRecord> ComputeRfsMetrics(const Frame& urf,
                                         std::span<const Frame> pool,
                                         std::span<const Frame> raws,
                                         const RfsConfig& config) {
  config.Validate();
  std::vector<RfsRecord> records;
  if (pool.empty()) return records;
  const Frame& raw_n = RawAt(raws, urf.index);
  const std::size_t first =
      pool.size() > static_cast<std::size_t>(config.pool_size)
          ? pool.size() - config.pool_size
          : 0;
  for (std::size_t k = first; k < pool.size(); ++k) {
    const Frame& p = pool[k];
    if (p.width() != urf.width() || p.height() != urf.height()) {
      throw ValidationError("rfs: pool frame resolution differs from URF");
    }
    RfsRecord r;
    r.pool_index = p.index;
    r.target_index = urf.index;
    r.d_psnr = DeltaPsnrChannels(p, RawAt(raws, p.index), urf, raw_n);
    for (int c = 0; c < 3; ++c) {
      r.cc[c] = CorrelationCoefficient(p.channel(c), urf.channel(c));
    }
    r.valid = IsValidReference(r.d_psnr, r.cc, config.cc_threshold);
    records.push_back(r);
  }
  return records;
}

RfsNetParams RfsNetParams::Initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RfsNetParams p;
  std::uniform_real_distribution<double> d1(-1.0 / std::sqrt(6.0),
                                            1.0 / std::sqrt(6.0));
  std::uniform_real_distribution<double> d2(-1.0 / std::sqrt(12.0),
                                            1.0 / std::sqrt(12.0));
  for (double& w : p.w1) w = d1(rng);
  for (double& w : p.w2) w = d2(rng);
  return p;
}

std::vector<double> RfsNetParams::Flatten() const {
  std::vector<double> flat;
  flat.reserve(kCount);
  flat.insert(flat.end(), w1.begin(), w1.end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.push_back(slope1);
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  flat.push_back(slope2);
  return flat;
}

RfsNetParams RfsNetParams::Unflatten(std::span<const double> flat) {
  if (flat.size() != kCount) {
    throw ValidationError("rfs params: expected " + std::to_string(kCount) +
                          " values, got " + std::to_string(flat.size()));
  }
  RfsNetParams p;
  auto it = flat.begin();
  std::copy_n(it, p.w1.size(), p.w1.begin());
  it += p.w1.size();
  std::copy_n(it, p.b1.size(), p.b1.begin());
  it += p.b1.size();
  p.slope1 = *it++;
  std::copy_n(it, p.w2.size(), p.w2.begin());
  it += p.w2.size();
  p.b2 = *it++;
  p.slope2 = *it++;
  return p;
}

bool RfsNetParams::AllFinite() const {
  const auto flat = Flatten();
  return std::all_of(flat.begin(), flat.end(),
                     [](double v) { return std::isfinite(v); });
}

double RfsRawOutput(const RfsNetParams& params,
                    const std::array<double, kRfsFeatures>& features) {
  return Evaluate(params, features).out;
}

std::vector<double> RfsForward(const RfsNetParams& params,
                               std::span<const RfsRecord> records) {
  if (records.empty()) throw ValidationError("rfs forward: empty batch");
  std::vector<double> raw;
  raw.reserve(records.size());
  for (const RfsRecord& r : records) {
    if (!r.valid) throw ValidationError("rfs forward: invalid record in batch");
    raw.push_back(RfsRawOutput(params, r.Features()));
  }
  return Zscore(raw).values;
}

double RfsLoss(std::span<const double> gt, std::span<const double> pred) {
  if (gt.size() != pred.size()) {
    throw ValidationError("rfs loss: length mismatch");
  }
  if (gt.empty()) return 0.0;
  const NormalizedBatch g = Zscore(gt);
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = g.values[i] - pred[i];
    loss += d * d;
  }
  return loss;
}

double RfsLossAndGradient(const RfsNetParams& params,
                          std::span<const std::array<double, kRfsFeatures>> x,
                          std::span<const double> gt,
                          std::vector<double>& grad) {
  if (x.size() != gt.size() || x.empty()) {
    throw ValidationError("rfs gradient: batch/label length mismatch");
  }
  std::vector<RfsActivations> acts;
  std::vector<double> raw;
  for (const auto& f : x) {
    acts.push_back(Evaluate(params, f));
    raw.push_back(acts.back().out);
  }
  const NormalizedBatch pred = Zscore(raw);
  const NormalizedBatch target = Zscore(gt);
  double loss = 0.0;
  std::vector<double> dz(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = pred.values[i] - target.values[i];
    loss += d * d;
    dz[i] = 2.0 * d;
  }
  const std::vector<double> dout = ZscoreBackward(raw, dz);

  RfsNetParams g;
  g.slope1 = 0.0;
  g.slope2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const RfsActivations& a = acts[i];
    const double dpre2 = dout[i] * (a.pre2 > 0.0 ? 1.0 : params.slope2);
    if (a.pre2 <= 0.0) g.slope2 += dout[i] * a.pre2;
    g.b2 += dpre2;
    for (int k = 0; k < kRfsHidden; ++k) {
      g.w2[k] += dpre2 * a.hidden[k];
      const double dh = dpre2 * params.w2[k];
      const double dpre1 = dh * (a.pre1[k] > 0.0 ? 1.0 : params.slope1);
      if (a.pre1[k] <= 0.0) g.slope1 += dh * a.pre1[k];
      g.b1[k] += dpre1;
      for (int j = 0; j < kRfsFeatures; ++j) {
        g.w1[k * kRfsFeatures + j] += dpre1 * x[i][j];
      }
    }
  }
  grad = g.Flatten();
  return loss;
}

std::vector<int> RankByScore(std::vector<std::pair<int, double>> scored,
                             int count) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first > b.first;
  });
  std::vector<int> out;
  for (int k = 0; k < count && k < static_cast<int>(scored.size()); ++k) {
    out.push_back(scored[k].first);
  }
  return out;
}

std::optional<std::vector<int>> SelectReferences(
    std::span<const RfsRecord> records, const RfsNetParams& params,
    const RfsConfig& config) {
  config.Validate();
  std::vector<RfsRecord> valid;
  for (const RfsRecord& r : records) {
    if (r.valid) valid.push_back(r);
  }
  if (static_cast<int>(valid.size()) < config.num_selected) return std::nullopt;
  // Fixed batch order keeps the normalization independent of input order.
  std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) {
    return a.pool_index < b.pool_index;
  });
  const std::vector<double> scores = RfsForward(params, valid);
  std::vector<std::pair<int, double>> scored;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    scored.emplace_back(valid[i].pool_index, scores[i]);
  }
  return RankByScore(std::move(scored), config.num_selected);
}

double GroundTruthPotential(const Frame& pool_frame, const Frame& urf,
                            const Frame& raw_n) {
  if (pool_frame.width() != urf.width() ||
      pool_frame.height() != urf.height() || raw_n.width() != urf.width() ||
      raw_n.height() != urf.height()) {
    throw ValidationError("ground-truth potential: resolution mismatch");
  }
  const Plane compensated = CompensateByBlockMatching(pool_frame.y, urf.y);
  return Psnr(compensated, raw_n.y);
}

}  // namespace mif
