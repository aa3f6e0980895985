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

#ifndef MIF_FILTERS_H_
#define MIF_FILTERS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mif/frame.h"
#include "mif/nn/dense_unit.h"
#include "mif/nn/guided_conv.h"
#include "mif/nn/mc_net.h"
#include "mif/partition.h"
#include "mif/rfs.h"

namespace mif {

struct MifNetOptions {
  int num_refs = 2;       // M
  bool shared_mc = true;  // one compensation subnet applied to every branch
  nn::McNetOptions mc;
  int guided_out = 16;  // P^O of the block-adaptive layer
  int growth = 12;      // channels per dense layer
};

template <typename T>
struct MifOutputs {
  nn::Var enhanced;  // clamp(urf + delta, 0, 1)
  nn::Var delta;
  std::vector<nn::Var> compensated;
  std::vector<nn::Var> flows;
  std::vector<nn::Var> branch_features;
};

// Multi-frame network: per reference a motion-compensation subnet, a
// block-adaptive layer on (compensated, urf, compensated - urf) guided by
// (cu, tu), and two dense units; branch outputs are concatenated and fused
// by two more dense units into a one-channel residual.
template <typename T>
class MifNet {
 public:
  explicit MifNet(const MifNetOptions& options, std::uint64_t seed = 1);

  const MifNetOptions& options() const { return options_; }
  nn::ParamSet<T>& params() { return params_; }
  const nn::ParamSet<T>& params() const { return params_; }

  // urf is (1,H,W), refs are M tensors (1,H,W), guidance (2,H,W).
  MifOutputs<T> Forward(nn::Graph<T>& g, nn::Var urf,
                        const std::vector<nn::Var>& refs,
                        nn::Var guidance) const;

  int dense_unit_count() const {
    return static_cast<int>(branch_units_.size() + fusion_units_.size());
  }
  int mc_subnet_count() const { return static_cast<int>(mc_.size()); }
  const nn::DenseUnit<T>& final_unit() const { return fusion_units_.back(); }

 private:
  MifNetOptions options_;
  nn::ParamSet<T> params_;
  std::vector<nn::McNet<T>> mc_;
  std::vector<nn::GuidedConv<T>> guided_;
  std::vector<nn::PreluLayer<T>> guided_act_;
  std::vector<nn::DenseUnit<T>> branch_units_;  // 2 per branch
  std::vector<nn::DenseUnit<T>> fusion_units_;
};

struct IfNetOptions {
  int guided_out = 16;
  int growth = 12;
};

// Single-frame network: block-adaptive layer on the URF alone followed by
// four dense units.
template <typename T>
class IfNet {
 public:
  static constexpr int kDenseUnits = 4;

  explicit IfNet(const IfNetOptions& options, std::uint64_t seed = 1);

  const IfNetOptions& options() const { return options_; }
  nn::ParamSet<T>& params() { return params_; }
  const nn::ParamSet<T>& params() const { return params_; }

  struct Outputs {
    nn::Var enhanced;
    nn::Var delta;
  };
  Outputs Forward(nn::Graph<T>& g, nn::Var urf, nn::Var guidance) const;

  int dense_unit_count() const { return static_cast<int>(units_.size()); }
  const nn::DenseUnit<T>& final_unit() const { return units_.back(); }

 private:
  IfNetOptions options_;
  nn::ParamSet<T> params_;
  std::optional<nn::GuidedConv<T>> guided_;
  nn::PreluLayer<T> guided_act_;
  std::vector<nn::DenseUnit<T>> units_;
};

// Inference on whole planes. Output samples are in [0,1].
template <typename T>
Plane MifForward(const MifNet<T>& net, const Plane& urf,
                 const std::vector<Plane>& refs, const PartitionMaps& maps);
template <typename T>
Plane IfForward(const IfNet<T>& net, const Plane& urf,
                const PartitionMaps& maps);

enum class FilterMode { kMif, kIf, kPassthrough };

const char* ModeName(FilterMode mode);
FilterMode ParseMode(const std::string& name);

struct ModeDecision {
  int frame_index = 0;
  FilterMode mode = FilterMode::kPassthrough;
  std::optional<double> psnr_mif;  // absent when RFS found < M references
  double psnr_if = 0.0;
  double psnr_pass = 0.0;
  std::vector<int> references;
};

// Candidate generators for the two network modes. Tests substitute doubles.
struct CandidateFilters {
  std::function<Plane(const Plane& urf, const std::vector<Plane>& refs,
                      const PartitionMaps& maps)>
      multi_frame;
  std::function<Plane(const Plane& urf, const PartitionMaps& maps)>
      single_frame;
};

CandidateFilters MakeCandidateFilters(const MifNet<float>& mif,
                                      const IfNet<float>& single);

struct EnhanceResult {
  Frame enhanced;
  ModeDecision decision;
};

// Encoder-side enhancement of one URF. References come from RFS over
// `pool`; the MIF candidate is evaluated only when at least M are valid.
// The mode with the highest luma PSNR against the raw frame wins; ties
// prefer PASSTHROUGH, then IF. Chroma passes through unchanged.
EnhanceResult EnhanceFrame(const Frame& urf, const PartitionMaps& maps,
                           std::span<const Frame> pool,
                           std::span<const Frame> raws,
                           const CandidateFilters& filters,
                           const RfsNetParams& rfs_params,
                           const RfsConfig& rfs_config);

// Decoder-side replay of a recorded decision (no raw frame needed).
Frame ReplayFrame(const Frame& urf, const PartitionMaps& maps,
                  std::span<const Frame> pool, const ModeDecision& decision,
                  const CandidateFilters& filters);

// CSV `frame_index,mode,psnr_mif,psnr_if,psnr_pass`; psnr_mif is empty when
// the MIF candidate was skipped.
void WriteDecisionsCsv(const std::filesystem::path& path,
                       const std::vector<ModeDecision>& decisions);
std::vector<ModeDecision> ReadDecisionsCsv(const std::filesystem::path& path);

}  // namespace mif

#endif  // MIF_FILTERS_H_
