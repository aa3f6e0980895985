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

#include "mif/filters.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mif/error.h"
#include "mif/metrics.h"
#include "mif/nn/ops.h"

namespace mif {

using nn::Var;

template <typename T>
MifNet<T>::MifNet(const MifNetOptions& options, std::uint64_t seed)
    : options_(options) {
  if (options.num_refs < 1) throw ConfigError("mif-net: num_refs must be >= 1");
  nn::Rng rng(seed);
  const int m = options.num_refs;
  const int mc_count = options.shared_mc ? 1 : m;
  for (int k = 0; k < mc_count; ++k) {
    mc_.emplace_back(params_, "mc" + std::to_string(k), options.mc, rng);
  }
  const int unit_out = nn::DenseUnit<T>::kLayers * options.growth;
  for (int b = 0; b < m; ++b) {
    const std::string prefix = "branch" + std::to_string(b);
    guided_.emplace_back(params_, prefix + ".guided", 3, 2, options.guided_out,
                         rng);
    guided_act_.push_back(nn::PreluLayer<T>::Create(
        params_, prefix + ".guided.act", options.guided_out));
    branch_units_.emplace_back(params_, prefix + ".dense0", options.guided_out,
                               options.growth, false, rng);
    branch_units_.emplace_back(params_, prefix + ".dense1", unit_out,
                               options.growth, false, rng);
  }
  fusion_units_.emplace_back(params_, "fusion.dense0", m * unit_out,
                             options.growth, false, rng);
  fusion_units_.emplace_back(params_, "fusion.dense1", unit_out, options.growth,
                             true, rng);
}

template <typename T>
MifOutputs<T> MifNet<T>::Forward(nn::Graph<T>& g, Var urf,
                                 const std::vector<Var>& refs,
                                 Var guidance) const {
  const int m = options_.num_refs;
  if (static_cast<int>(refs.size()) != m) {
    throw ValidationError("mif-net: expected " + std::to_string(m) +
                          " reference planes, got " +
                          std::to_string(refs.size()));
  }
  MifOutputs<T> out;
  std::vector<Var> branch_out;
  for (int b = 0; b < m; ++b) {
    const nn::McNet<T>& mc = mc_[options_.shared_mc ? 0 : b];
    const auto comp = mc.Forward(g, refs[b], urf);
    out.compensated.push_back(comp.compensated);
    out.flows.push_back(comp.flow);
    const Var input = nn::Concat(
        g,
        {nn::CenterSamples(g, comp.compensated), nn::CenterSamples(g, urf),
         nn::Scale(g, nn::Sub(g, comp.compensated, urf), T(nn::kInputScale))});
    Var h = guided_act_[b](g, guided_[b].Forward(g, input, guidance));
    h = branch_units_[2 * b].Forward(g, h);
    h = branch_units_[2 * b + 1].Forward(g, h);
    out.branch_features.push_back(h);
    branch_out.push_back(h);
  }
  Var fused = m == 1 ? branch_out.front() : nn::Concat(g, branch_out);
  fused = fusion_units_[0].Forward(g, fused);
  out.delta = fusion_units_[1].Forward(g, fused);
  nn::CheckFinite(g, out.delta, "fusion.dense1");
  out.enhanced = nn::Clamp(g, nn::Add(g, urf, out.delta), T(0), T(1));
  return out;
}

template <typename T>
IfNet<T>::IfNet(const IfNetOptions& options, std::uint64_t seed)
    : options_(options) {
  nn::Rng rng(seed);
  guided_.emplace(params_, "guided", 1, 2, options.guided_out, rng);
  guided_act_ =
      nn::PreluLayer<T>::Create(params_, "guided.act", options.guided_out);
  const int unit_out = nn::DenseUnit<T>::kLayers * options.growth;
  for (int k = 0; k < kDenseUnits; ++k) {
    units_.emplace_back(params_, "dense" + std::to_string(k),
                        k == 0 ? options.guided_out : unit_out, options.growth,
                        k == kDenseUnits - 1, rng);
  }
}

template <typename T>
typename IfNet<T>::Outputs IfNet<T>::Forward(nn::Graph<T>& g, Var urf,
                                             Var guidance) const {
  Var h =
      guided_act_(g, guided_->Forward(g, nn::CenterSamples(g, urf), guidance));
  for (const auto& unit : units_) h = unit.Forward(g, h);
  nn::CheckFinite(g, h, "dense" + std::to_string(kDenseUnits - 1));
  Outputs out;
  out.delta = h;
  out.enhanced = nn::Clamp(g, nn::Add(g, urf, h), T(0), T(1));
  return out;
}

namespace {

template <typename T>
Var GuidanceVar(nn::Graph<T>& g, const PartitionMaps& maps) {
  const Plane* planes[] = {&maps.cu, &maps.tu};
  return g.Constant(nn::FromPlanes<T>(planes));
}

void CheckAligned(const Plane& urf, const PartitionMaps& maps) {
  if (!maps.cu.SameShape(urf) || !maps.tu.SameShape(urf)) {
    throw ValidationError("partition maps do not match the URF resolution");
  }
}

// The residual is added in double precision so a zero residual returns the
// URF bit for bit regardless of the network's scalar type.
template <typename T>
Plane AddResidual(const Plane& urf, const nn::Tensor<T>& delta) {
  Plane out(urf.width(), urf.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] =
        std::clamp(urf.data()[i] + static_cast<double>(delta[i]), 0.0, 1.0);
  }
  return out;
}

}  // namespace

template <typename T>
Plane MifForward(const MifNet<T>& net, const Plane& urf,
                 const std::vector<Plane>& refs, const PartitionMaps& maps) {
  CheckAligned(urf, maps);
  nn::Graph<T> g(false);
  const Var u = g.Constant(nn::FromPlane<T>(urf));
  std::vector<Var> r;
  for (const Plane& p : refs) {
    if (!p.SameShape(urf)) {
      throw ValidationError("mif forward: reference resolution mismatch");
    }
    r.push_back(g.Constant(nn::FromPlane<T>(p)));
  }
  const auto out = net.Forward(g, u, r, GuidanceVar(g, maps));
  return AddResidual(urf, g.value(out.delta));
}

template <typename T>
Plane IfForward(const IfNet<T>& net, const Plane& urf,
                const PartitionMaps& maps) {
  CheckAligned(urf, maps);
  nn::Graph<T> g(false);
  const Var u = g.Constant(nn::FromPlane<T>(urf));
  const auto out = net.Forward(g, u, GuidanceVar(g, maps));
  return AddResidual(urf, g.value(out.delta));
}

const char* ModeName(FilterMode mode) {
  switch (mode) {
    case FilterMode::kMif:
      return "MIF";
    case FilterMode::kIf:
      return "IF";
    case FilterMode::kPassthrough:
      return "PASSTHROUGH";
  }
  return "?";
}

FilterMode ParseMode(const std::string& name) {
  if (name == "MIF") return FilterMode::kMif;
  if (name == "IF") return FilterMode::kIf;
  if (name == "PASSTHROUGH") return FilterMode::kPassthrough;
  throw IoError("unknown filter mode '" + name + "'");
}

CandidateFilters MakeCandidateFilters(const MifNet<float>& mif,
                                      const IfNet<float>& single) {
  CandidateFilters f;
  f.multi_frame = [&mif](const Plane& urf, const std::vector<Plane>& refs,
                         const PartitionMaps& maps) {
    return MifForward(mif, urf, refs, maps);
  };
  f.single_frame = [&single](const Plane& urf, const PartitionMaps& maps) {
    return IfForward(single, urf, maps);
  };
  return f;
}

namespace {

const Frame& PoolFrame(std::span<const Frame> pool, int index) {
  for (const Frame& f : pool) {
    if (f.index == index) return f;
  }
  throw ValidationError("pool lacks frame " + std::to_string(index));
}

std::vector<Plane> ReferenceLumas(std::span<const Frame> pool,
                                  const std::vector<int>& indices) {
  std::vector<Plane> refs;
  for (int i : indices) refs.push_back(PoolFrame(pool, i).y);
  return refs;
}

Frame WithLuma(const Frame& urf, Plane luma) {
  Frame out = urf;
  out.y = std::move(luma);
  out.role = FrameRole::kEnhanced;
  return out;
}

}  // namespace

EnhanceResult EnhanceFrame(const Frame& urf, const PartitionMaps& maps,
                           std::span<const Frame> pool,
                           std::span<const Frame> raws,
                           const CandidateFilters& filters,
                           const RfsNetParams& rfs_params,
                           const RfsConfig& rfs_config) {
  const Frame& raw = RawAt(raws, urf.index);
  if (raw.width() != urf.width() || raw.height() != urf.height()) {
    throw ValidationError("raw frame resolution differs from URF");
  }
  ModeDecision d;
  d.frame_index = urf.index;
  d.psnr_pass = Psnr(urf.y, raw.y);
  Plane best = urf.y;
  double best_psnr = d.psnr_pass;

  Plane single = filters.single_frame(urf.y, maps);
  d.psnr_if = Psnr(single, raw.y);
  if (d.psnr_if > best_psnr) {
    best_psnr = d.psnr_if;
    best = std::move(single);
    d.mode = FilterMode::kIf;
  }

  const auto records = ComputeRfsMetrics(urf, pool, raws, rfs_config);
  const auto selected = SelectReferences(records, rfs_params, rfs_config);
  if (selected) {
    d.references = *selected;
    Plane multi =
        filters.multi_frame(urf.y, ReferenceLumas(pool, *selected), maps);
    d.psnr_mif = Psnr(multi, raw.y);
    if (*d.psnr_mif > best_psnr) {
      best_psnr = *d.psnr_mif;
      best = std::move(multi);
      d.mode = FilterMode::kMif;
    }
  }
  return {WithLuma(urf, std::move(best)), d};
}

Frame ReplayFrame(const Frame& urf, const PartitionMaps& maps,
                  std::span<const Frame> pool, const ModeDecision& decision,
                  const CandidateFilters& filters) {
  switch (decision.mode) {
    case FilterMode::kMif:
      return WithLuma(
          urf, filters.multi_frame(
                   urf.y, ReferenceLumas(pool, decision.references), maps));
    case FilterMode::kIf:
      return WithLuma(urf, filters.single_frame(urf.y, maps));
    case FilterMode::kPassthrough:
      break;
  }
  return WithLuma(urf, urf.y);
}

void WriteDecisionsCsv(const std::filesystem::path& path,
                       const std::vector<ModeDecision>& decisions) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "frame_index,mode,psnr_mif,psnr_if,psnr_pass,references\n";
  for (const ModeDecision& d : decisions) {
    out << d.frame_index << "," << ModeName(d.mode) << ",";
    if (d.psnr_mif) out << *d.psnr_mif;
    out << "," << d.psnr_if << "," << d.psnr_pass << ",";
    for (std::size_t i = 0; i < d.references.size(); ++i) {
      out << (i ? " " : "") << d.references[i];
    }
    out << "\n";
  }
}

std::vector<ModeDecision> ReadDecisionsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ModeDecision> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("frame_index", 0) == 0) continue;
    std::stringstream ss(line);
    std::string idx, mode, mif, single, pass, refs;
    std::getline(ss, idx, ',');
    std::getline(ss, mode, ',');
    std::getline(ss, mif, ',');
    std::getline(ss, single, ',');
    std::getline(ss, pass, ',');
    std::getline(ss, refs);
    try {
      ModeDecision d;
      d.frame_index = std::stoi(idx);
      d.mode = ParseMode(mode);
      if (!mif.empty()) d.psnr_mif = std::stod(mif);
      d.psnr_if = std::stod(single);
      d.psnr_pass = std::stod(pass);
      std::istringstream rs(refs);
      for (std::string r; rs >> r;) d.references.push_back(std::stoi(r));
      out.push_back(d);
    } catch (const std::logic_error&) {
      throw IoError(path.string() + ": malformed row '" + line + "'");
    }
  }
  return out;
}

template class MifNet<float>;
template class MifNet<double>;
template class IfNet<float>;
template class IfNet<double>;
template Plane MifForward<float>(const MifNet<float>&, const Plane&,
                                 const std::vector<Plane>&,
                                 const PartitionMaps&);
template Plane MifForward<double>(const MifNet<double>&, const Plane&,
                                  const std::vector<Plane>&,
                                  const PartitionMaps&);
template Plane IfForward<float>(const IfNet<float>&, const Plane&,
                                const PartitionMaps&);
template Plane IfForward<double>(const IfNet<double>&, const Plane&,
                                 const PartitionMaps&);

}  // namespace mif
