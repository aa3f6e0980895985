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

#include "mif/experiment.h"

#include <algorithm>
#include <fstream>
#include <memory>

#include "mif/bjontegaard.h"
#include "mif/error.h"
#include "mif/metrics.h"
#include "mif/model_bundle.h"
#include "mif/synthetic.h"
#include "mif/yuv_io.h"

namespace mif {
namespace {

RdCurve SortedByRate(RdCurve c) {
  std::sort(c.begin(), c.end(), [](const RdPoint& a, const RdPoint& b) {
    return a.bitrate < b.bitrate;
  });
  return c;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T Field(const nlohmann::json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(where) + ": '" + key + "' has wrong type");
  }
}

}  // namespace

int QpRun::CountMode(FilterMode mode) const {
  return static_cast<int>(std::count_if(
      frames.begin(), frames.end(),
      [mode](const FrameLog& f) { return f.decision.mode == mode; }));
}

ExperimentReport RunExperiment(
    const std::vector<SequenceInput>& sequences,
    const std::function<const ModelSet&(int qp)>& models_for_qp,
    const ExperimentConfig& config) {
  config.rfs.Validate();
  if (config.qps.size() < 4) {
    throw ValidationError("experiment: BD metrics need at least four QPs");
  }
  ExperimentReport report;
  for (const SequenceInput& seq : sequences) {
    if (seq.raw.empty()) {
      throw ValidationError("experiment: sequence " + seq.name + " is empty");
    }
    SequenceReport sr;
    sr.name = seq.name;
    RdCurve anchor, enhanced;
    for (int qp : config.qps) {
      const ModelSet& models = models_for_qp(qp);
      const CandidateFilters filters =
          MakeCandidateFilters(models.mif, models.single);
      ProxyCodecConfig codec = config.codec;
      codec.qp_base = qp;
      const ProxyEncodeResult coded = ProxyEncode(seq.raw, codec);

      QpRun run;
      run.qp = qp;
      run.bitrate = coded.bitrate;
      std::vector<Frame> pool;
      double anchor_sum = 0.0, enhanced_sum = 0.0;
      for (std::size_t n = 0; n < coded.urfs.size(); ++n) {
        const Frame& urf = coded.urfs[n];
        const std::size_t first =
            pool.size() > static_cast<std::size_t>(config.rfs.pool_size)
                ? pool.size() - config.rfs.pool_size
                : 0;
        EnhanceResult r = EnhanceFrame(
            urf, coded.maps[n], std::span<const Frame>(pool).subspan(first),
            seq.raw, filters, models.rfs, config.rfs);
        anchor_sum += r.decision.psnr_pass;
        enhanced_sum += Psnr(r.enhanced.y, seq.raw[n].y);
        r.enhanced.role = FrameRole::kEnhanced;
        pool.push_back(std::move(r.enhanced));
        run.frames.push_back({r.decision, coded.stats[n].qp,
                              coded.stats[n].nonzero_coefficients});
      }
      const double frames = static_cast<double>(coded.urfs.size());
      run.anchor_psnr = anchor_sum / frames;
      run.enhanced_psnr = enhanced_sum / frames;
      anchor.push_back({run.bitrate, run.anchor_psnr});
      enhanced.push_back({run.bitrate, run.enhanced_psnr});
      sr.runs.push_back(std::move(run));
    }
    sr.bd_rate = BdRate(SortedByRate(anchor), SortedByRate(enhanced));
    sr.bd_psnr = BdPsnr(SortedByRate(anchor), SortedByRate(enhanced));
    report.sequences.push_back(std::move(sr));
  }
  return report;
}

void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream rd(dir / "rd_points.csv", std::ios::trunc);
  std::ofstream bd(dir / "bd_summary.csv", std::ios::trunc);
  if (!rd || !bd) throw IoError("cannot write report into " + dir.string());
  rd.precision(17);
  bd.precision(17);
  rd << "sequence,qp,bitrate_proxy,psnr_anchor,psnr_enhanced,frames_mif,"
        "frames_if,frames_passthrough\n";
  bd << "sequence,bd_rate_percent,bd_psnr_db\n";
  for (const SequenceReport& s : report.sequences) {
    for (const QpRun& r : s.runs) {
      rd << s.name << ',' << r.qp << ',' << r.bitrate << ',' << r.anchor_psnr
         << ',' << r.enhanced_psnr << ',' << r.CountMode(FilterMode::kMif)
         << ',' << r.CountMode(FilterMode::kIf) << ','
         << r.CountMode(FilterMode::kPassthrough) << '\n';
      std::vector<ModeDecision> decisions;
      for (const FrameLog& f : r.frames) decisions.push_back(f.decision);
      WriteDecisionsCsv(
          dir / ("decisions_" + s.name + "_qp" + std::to_string(r.qp) + ".csv"),
          decisions);
    }
    bd << s.name << ',' << s.bd_rate << ',' << s.bd_psnr << '\n';
  }
  if (!rd || !bd) throw IoError("failed writing report into " + dir.string());
}

ExperimentManifest ExperimentManifest::Parse(
    const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ExperimentManifest m;
  if (!j.is_object()) throw ConfigError("manifest: expected a JSON object");
  for (const auto& s : Field<nlohmann::json>(j, "sequences", "manifest")) {
    Sequence seq;
    seq.name = Field<std::string>(s, "name", "manifest sequence");
    if (s.contains("synthetic")) {
      seq.synthetic = s.at("synthetic");
    } else {
      seq.path = Resolve(base_dir, Field<std::string>(s, "path", "sequence"));
      seq.width = Field<int>(s, "width", "sequence");
      seq.height = Field<int>(s, "height", "sequence");
      seq.bit_depth = s.value("bit_depth", 8);
      if (s.contains("frames"))
        seq.frames = Field<int>(s, "frames", "sequence");
    }
    m.sequences.push_back(std::move(seq));
  }
  if (m.sequences.empty()) throw ConfigError("manifest: no sequences");
  if (j.contains("qps")) m.qps = Field<std::vector<int>>(j, "qps", "manifest");
  const auto models = Field<nlohmann::json>(j, "models", "manifest");
  for (const auto& [key, entry] : models.items()) {
    ModelPaths p;
    p.mif = Resolve(base_dir, Field<std::string>(entry, "mif", "models"));
    p.single = Resolve(base_dir, Field<std::string>(entry, "if", "models"));
    p.rfs = Resolve(base_dir, Field<std::string>(entry, "rfs", "models"));
    m.models[key] = p;
  }
  m.output_dir = Resolve(base_dir, j.value("output_dir", "report"));
  m.seed = j.value("seed", std::uint64_t{1});
  m.config.qps = m.qps;
  m.config.codec.seed = m.seed;
  if (j.contains("codec")) {
    const auto& c = j.at("codec");
    m.config.codec.gop_size = c.value("gop_size", m.config.codec.gop_size);
    if (c.contains("qp_offsets")) {
      m.config.codec.qp_offsets = c.at("qp_offsets").get<std::vector<int>>();
    }
    m.config.codec.fps = c.value("fps", m.config.codec.fps);
    m.config.codec.split_variance =
        c.value("split_variance", m.config.codec.split_variance);
  }
  if (j.contains("rfs")) {
    const auto& r = j.at("rfs");
    m.config.rfs.pool_size = r.value("pool_size", m.config.rfs.pool_size);
    m.config.rfs.cc_threshold =
        r.value("cc_threshold", m.config.rfs.cc_threshold);
    m.config.rfs.num_selected =
        r.value("num_selected", m.config.rfs.num_selected);
  }
  m.config.codec.qp_base = m.qps.empty() ? 37 : m.qps.front();
  m.config.codec.Validate();
  m.config.rfs.Validate();
  return m;
}

ExperimentManifest ExperimentManifest::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  return Parse(j, path.parent_path());
}

const ModelPaths& ExperimentManifest::ModelsFor(int qp) const {
  auto it = models.find(std::to_string(qp));
  if (it == models.end()) it = models.find("default");
  if (it == models.end()) {
    throw ValidationError("no model bundles listed for QP " +
                          std::to_string(qp));
  }
  return it->second;
}

void ExperimentManifest::CheckInputs() const {
  for (const Sequence& s : sequences) {
    if (s.path && !std::filesystem::exists(*s.path)) {
      throw ValidationError("sequence file " + s.path->string() +
                            " does not exist");
    }
  }
  for (int qp : qps) {
    const ModelPaths& p = ModelsFor(qp);
    for (const auto* f : {&p.mif, &p.single, &p.rfs}) {
      if (!std::filesystem::exists(*f)) {
        throw ValidationError("model bundle " + f->string() +
                              " does not exist");
      }
    }
  }
}

std::vector<Frame> LoadManifestSequence(
    const ExperimentManifest::Sequence& seq) {
  if (seq.synthetic) {
    ClipOptions o;
    const nlohmann::json& s = *seq.synthetic;
    o.width = s.value("width", o.width);
    o.height = s.value("height", o.height);
    o.frames = s.value("frames", o.frames);
    o.seed = s.value("seed", o.seed);
    o.max_speed = s.value("max_speed", o.max_speed);
    return SyntheticClip(o);
  }
  std::vector<Frame> frames =
      ReadYuvSequence(*seq.path, seq.width, seq.height, seq.bit_depth);
  if (seq.frames && *seq.frames < static_cast<int>(frames.size())) {
    frames.resize(*seq.frames);
  }
  return frames;
}

ExperimentReport RunExperimentManifest(const ExperimentManifest& manifest) {
  manifest.CheckInputs();
  std::vector<SequenceInput> inputs;
  for (const auto& s : manifest.sequences) {
    inputs.push_back({s.name, LoadManifestSequence(s)});
  }
  std::map<std::string, std::unique_ptr<ModelSet>> cache;
  auto models_for = [&](int qp) -> const ModelSet& {
    const ModelPaths& p = manifest.ModelsFor(qp);
    const std::string key =
        p.mif.string() + "|" + p.single.string() + "|" + p.rfs.string();
    auto it = cache.find(key);
    if (it == cache.end()) {
      auto set = std::make_unique<ModelSet>(
          ModelSet{LoadMifNet(ModelBundle::Load(p.mif)),
                   LoadIfNet(ModelBundle::Load(p.single)),
                   LoadRfsParams(ModelBundle::Load(p.rfs))});
      if (set->mif.options().num_refs != manifest.config.rfs.num_selected) {
        throw ValidationError("MIF bundle " + p.mif.string() + " expects " +
                              std::to_string(set->mif.options().num_refs) +
                              " references but RFS selects " +
                              std::to_string(manifest.config.rfs.num_selected));
      }
      it = cache.emplace(key, std::move(set)).first;
    }
    return *it->second;
  };
  ExperimentReport report = RunExperiment(inputs, models_for, manifest.config);
  WriteExperimentReport(report, manifest.output_dir);
  return report;
}

}  // namespace mif
