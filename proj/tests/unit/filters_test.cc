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

#include <fstream>

#include "doctest.h"
#include "mif/error.h"
#include "mif/metrics.h"
#include "test_support.h"

namespace mif {
namespace {

using testing::Uniform;

PartitionMaps UniformMaps(int w, int h) {
  BlockLayout layout;
  for (int y = 0; y < h; y += 8) {
    for (int x = 0; x < w; x += 8) {
      layout.cu.push_back({x, y, 8, 8});
      layout.tu.push_back({x, y, 8, 8});
    }
  }
  return RasterizePartition(layout, w, h);
}

MifNetOptions TinyMif() {
  MifNetOptions o;
  o.mc.channels = 4;
  o.guided_out = 4;
  o.growth = 3;
  return o;
}

template <typename T>
void Jitter(nn::ParamSet<T>& params, std::uint64_t seed) {
  testing::Rng rng(seed);
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (T& v : params[i].value.values())
      v += static_cast<T>(Uniform(rng, -0.05, 0.05));
  }
}

// Raw frames share one base image; the pool holds lightly distorted copies
// and the URF is distorted more, so every pool frame is a valid reference.
struct Scene {
  std::vector<Frame> raws;
  std::vector<Frame> pool;
  Frame urf;
};

Scene MakeScene(testing::Rng& rng, int pool_size, int w = 32, int h = 32) {
  Scene s;
  const Frame base = testing::RandomFrame(rng, w, h, 0);
  for (int i = 0; i <= pool_size; ++i) {
    Frame raw = base;
    raw.index = i;
    for (int c = 0; c < 3; ++c)
      raw.channel(c) = testing::Noisy(base.channel(c), rng, 0.01);
    s.raws.push_back(raw);
  }
  for (int i = 0; i < pool_size; ++i) {
    Frame p = s.raws[i];
    p.role = FrameRole::kEnhanced;
    for (int c = 0; c < 3; ++c)
      p.channel(c) = testing::Noisy(s.raws[i].channel(c), rng, 0.02);
    s.pool.push_back(p);
  }
  s.urf = s.raws[pool_size];
  s.urf.role = FrameRole::kUrf;
  for (int c = 0; c < 3; ++c) {
    s.urf.channel(c) = testing::Noisy(s.raws[pool_size].channel(c), rng, 0.15);
  }
  return s;
}

CandidateFilters Doubles(std::function<Plane(const Plane&)> multi,
                         std::function<Plane(const Plane&)> single) {
  CandidateFilters f;
  f.multi_frame = [multi](const Plane& urf, const std::vector<Plane>&,
                          const PartitionMaps&) { return multi(urf); };
  f.single_frame = [single](const Plane& urf, const PartitionMaps&) {
    return single(urf);
  };
  return f;
}

TEST_CASE("network topology counts") {
  MifNet<float> shared(TinyMif());
  CHECK(shared.dense_unit_count() == 6);
  CHECK(shared.mc_subnet_count() == 1);
  CHECK(shared.final_unit().out_channels() == 1);
  MifNetOptions per_branch = TinyMif();
  per_branch.shared_mc = false;
  per_branch.num_refs = 3;
  MifNet<float> separate(per_branch);
  CHECK(separate.dense_unit_count() == 8);
  CHECK(separate.mc_subnet_count() == 3);
  IfNet<float> single({.guided_out = 4, .growth = 3});
  CHECK(single.dense_unit_count() == 4);
}

TEST_CASE("fresh networks are the identity residual") {
  testing::Rng rng(71);
  const Plane urf = testing::RandomPlane(rng, 16, 16);
  const PartitionMaps maps = UniformMaps(16, 16);
  MifNet<double> mif(TinyMif(), 3);
  IfNet<double> single({.guided_out = 4, .growth = 3}, 3);
  const std::vector<Plane> refs = {testing::RandomPlane(rng, 16, 16),
                                   testing::RandomPlane(rng, 16, 16)};
  CHECK(MifForward(mif, urf, refs, maps) == urf);
  CHECK(IfForward(single, urf, maps) == urf);
}

TEST_CASE("forward contract on 64x64 inputs") {
  testing::Rng rng(72);
  const Plane urf = testing::RandomPlane(rng, 64, 64);
  const PartitionMaps maps = UniformMaps(64, 64);
  const std::vector<Plane> refs = {testing::RandomPlane(rng, 64, 64),
                                   testing::RandomPlane(rng, 64, 64)};
  MifNet<float> mif(TinyMif(), 4);
  Jitter(mif.params(), 5);
  IfNet<float> single({.guided_out = 4, .growth = 3}, 4);
  Jitter(single.params(), 6);
  const Plane a = MifForward(mif, urf, refs, maps);
  const Plane b = IfForward(single, urf, maps);
  for (const Plane* p : {&a, &b}) {
    CHECK(p->width() == 64);
    CHECK(p->height() == 64);
    CHECK(p->AllFinite());
    CHECK(p->AllInRange(0.0, 1.0));
  }
  CHECK(a != urf);
  CHECK(MifForward(mif, urf, refs, maps) == a);

  CHECK_THROWS_AS(MifForward(mif, urf, {refs[0]}, maps), ValidationError);
  CHECK_THROWS_AS(IfForward(single, urf, UniformMaps(32, 32)), ValidationError);
}

TEST_CASE("permuting references permutes the compensation branches") {
  testing::Rng rng(73);
  MifNet<double> net(TinyMif(), 8);
  Jitter(net.params(), 9);
  const auto urf = testing::RandomTensor<double>(rng, 1, 16, 16, 0, 1);
  const auto r0 = testing::RandomTensor<double>(rng, 1, 16, 16, 0, 1);
  const auto r1 = testing::RandomTensor<double>(rng, 1, 16, 16, 0, 1);
  const nn::Tensor<double> guide(2, 16, 16, -1.0);
  nn::Graph<double> g(false);
  const auto fwd = net.Forward(
      g, g.Constant(urf), {g.Constant(r0), g.Constant(r1)}, g.Constant(guide));
  const auto rev = net.Forward(
      g, g.Constant(urf), {g.Constant(r1), g.Constant(r0)}, g.Constant(guide));
  CHECK(g.value(fwd.compensated[0]) == g.value(rev.compensated[1]));
  CHECK(g.value(fwd.compensated[1]) == g.value(rev.compensated[0]));
  CHECK(g.value(fwd.flows[0]) == g.value(rev.flows[1]));
}

TEST_CASE("degrading candidates fall back to passthrough") {
  testing::Rng rng(74);
  Scene s = MakeScene(rng, 4);
  const auto maps = UniformMaps(32, 32);
  const auto worse = [](const Plane& p) {
    Plane out = p;
    for (double& v : out.samples()) v = 1.0 - v;
    return out;
  };
  const auto r =
      EnhanceFrame(s.urf, maps, s.pool, s.raws, Doubles(worse, worse),
                   RfsNetParams::Initialize(1), RfsConfig{});
  CHECK(r.decision.mode == FilterMode::kPassthrough);
  CHECK(r.decision.psnr_mif.has_value());
  CHECK(r.enhanced.y == s.urf.y);
  CHECK(r.enhanced.u == s.urf.u);
  CHECK(r.enhanced.role == FrameRole::kEnhanced);
}

TEST_CASE("an oracle multi-frame candidate wins with the cap") {
  testing::Rng rng(75);
  Scene s = MakeScene(rng, 4);
  const Plane raw = s.raws.back().y;
  const auto r = EnhanceFrame(s.urf, UniformMaps(32, 32), s.pool, s.raws,
                              Doubles([raw](const Plane&) { return raw; },
                                      [](const Plane& p) { return p; }),
                              RfsNetParams::Initialize(1), RfsConfig{});
  CHECK(r.decision.mode == FilterMode::kMif);
  CHECK(*r.decision.psnr_mif == kPsnrCap);
  CHECK(r.decision.references.size() == 2);
  CHECK(r.enhanced.y == raw);
}

TEST_CASE("too few references skip the multi-frame candidate") {
  testing::Rng rng(76);
  Scene s = MakeScene(rng, 1);
  bool called = false;
  CandidateFilters f = Doubles([](const Plane& p) { return p; },
                               [](const Plane& p) { return p; });
  f.multi_frame = [&](const Plane& p, const std::vector<Plane>&,
                      const PartitionMaps&) {
    called = true;
    return p;
  };
  const auto r = EnhanceFrame(s.urf, UniformMaps(32, 32), s.pool, s.raws, f,
                              RfsNetParams::Initialize(1), RfsConfig{});
  CHECK_FALSE(called);
  CHECK_FALSE(r.decision.psnr_mif.has_value());
  CHECK(r.decision.mode != FilterMode::kMif);
  // Identical candidates tie; passthrough wins ties.
  CHECK(r.decision.mode == FilterMode::kPassthrough);
}

TEST_CASE("property: selection never lowers luma PSNR and picks the maximum") {
  testing::Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Scene s = MakeScene(rng, testing::UniformInt(rng, 0, 5));
    const Plane raw = s.raws.back().y;
    auto blend = [&rng, raw](double lo, double hi) {
      const double t = Uniform(rng, lo, hi);
      return [t, raw](const Plane& urf) {
        Plane out = urf;
        for (std::size_t i = 0; i < out.size(); ++i) {
          out.data()[i] = std::clamp(
              urf.data()[i] + t * (raw.data()[i] - urf.data()[i]), 0.0, 1.0);
        }
        return out;
      };
    };
    const auto r = EnhanceFrame(s.urf, UniformMaps(32, 32), s.pool, s.raws,
                                Doubles(blend(-1.0, 1.5), blend(-1.0, 1.5)),
                                RfsNetParams::Initialize(trial), RfsConfig{});
    const double urf_psnr = Psnr(s.urf.y, raw);
    const double out_psnr = Psnr(r.enhanced.y, raw);
    CHECK(out_psnr >= urf_psnr);
    double best = std::max(r.decision.psnr_pass, r.decision.psnr_if);
    if (r.decision.psnr_mif) best = std::max(best, *r.decision.psnr_mif);
    CHECK(out_psnr == best);
  }
}

TEST_CASE("replay reproduces the encoder output without raw frames") {
  testing::Rng rng(78);
  Scene s = MakeScene(rng, 4);
  const auto maps = UniformMaps(32, 32);
  MifNet<float> mif(TinyMif(), 2);
  Jitter(mif.params(), 3);
  IfNet<float> single({.guided_out = 4, .growth = 3}, 2);
  Jitter(single.params(), 4);
  const CandidateFilters filters = MakeCandidateFilters(mif, single);
  const auto r = EnhanceFrame(s.urf, maps, s.pool, s.raws, filters,
                              RfsNetParams::Initialize(5), RfsConfig{});
  const Frame replay = ReplayFrame(s.urf, maps, s.pool, r.decision, filters);
  CHECK(replay.y == r.enhanced.y);

  std::vector<Frame> no_raw(s.raws.begin(), s.raws.end() - 1);
  CHECK_THROWS_AS(EnhanceFrame(s.urf, maps, s.pool, no_raw, filters,
                               RfsNetParams::Initialize(5), RfsConfig{}),
                  ValidationError);
}

TEST_CASE("decisions csv round trip") {
  testing::TempDir dir("decisions");
  std::vector<ModeDecision> ds(3);
  ds[0] = {0, FilterMode::kPassthrough, std::nullopt, 30.25, 30.5, {}};
  ds[1] = {1, FilterMode::kMif, 33.125, 31.0, 30.0, {0, 12}};
  ds[2] = {2, FilterMode::kIf, 29.0, 32.0, 31.0, {}};
  WriteDecisionsCsv(dir / "d.csv", ds);
  const auto back = ReadDecisionsCsv(dir / "d.csv");
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i].frame_index == ds[i].frame_index);
    CHECK(back[i].mode == ds[i].mode);
    CHECK(back[i].psnr_mif == ds[i].psnr_mif);
    CHECK(back[i].psnr_if == ds[i].psnr_if);
    CHECK(back[i].psnr_pass == ds[i].psnr_pass);
    CHECK(back[i].references == ds[i].references);
  }
  // Files without the references column still load.
  std::ofstream(dir / "short.csv")
      << "frame_index,mode,psnr_mif,psnr_if,psnr_pass\n"
         "4,IF,,31.5,30\n";
  const auto short_rows = ReadDecisionsCsv(dir / "short.csv");
  REQUIRE(short_rows.size() == 1);
  CHECK(short_rows[0].frame_index == 4);
  CHECK(short_rows[0].references.empty());
  std::ofstream(dir / "bad.csv") << "1,IF,,x,30\n";
  CHECK_THROWS_AS(ReadDecisionsCsv(dir / "bad.csv"), IoError);
  CHECK(std::string(ModeName(FilterMode::kIf)) == "IF");
  CHECK(ParseMode("MIF") == FilterMode::kMif);
  CHECK_THROWS_AS(ParseMode("DBF"), IoError);
}

}  // namespace
}  // namespace mif
