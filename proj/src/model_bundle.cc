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

#include "mif/model_bundle.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mif/error.h"

namespace mif {
namespace {

constexpr char kMagic[4] = {'M', 'I', 'F', 'B'};
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "bundle I/O assumes a little-endian host");

void AppendU64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

std::uint64_t ReadU64(const std::string& in, std::size_t offset) {
  std::uint64_t v;
  std::memcpy(&v, in.data() + offset, 8);
  return v;
}

std::size_t ShapeCount(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ValidationError("bundle: negative tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

const nlohmann::json& Require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ValidationError(std::string("bundle: manifest missing '") + key +
                          "'");
  }
  return j.at(key);
}

}  // namespace

std::uint64_t Fnv1a64(const std::uint8_t* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

const BundleTensor* ModelBundle::Find(const std::string& name) const {
  for (const BundleTensor& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::size_t ModelBundle::ElementCount() const {
  std::size_t n = 0;
  for (const BundleTensor& t : tensors) n += t.data.size();
  return n;
}

std::uint64_t ModelBundle::PayloadChecksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const BundleTensor& t : tensors) {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(t.data.data());
    for (std::size_t i = 0; i < t.data.size() * sizeof(float); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

nlohmann::json ModelBundle::Manifest() const {
  nlohmann::json table = nlohmann::json::array();
  for (const BundleTensor& t : tensors) {
    table.push_back({{"name", t.name}, {"shape", t.shape}});
  }
  return {{"format", "mif-model-bundle"},
          {"version", kFormatVersion},
          {"kind", kind},
          {"metadata", metadata},
          {"tensors", table}};
}

void ModelBundle::Save(const std::filesystem::path& path) const {
  for (const BundleTensor& t : tensors) {
    if (ShapeCount(t.shape) != t.data.size()) {
      throw ValidationError("bundle: tensor " + t.name +
                            " data does not match its shape");
    }
  }
  const std::string manifest = Manifest().dump();
  std::string blob(kMagic, 4);
  AppendU64(blob, manifest.size());
  blob += manifest;
  for (const BundleTensor& t : tensors) {
    blob.append(reinterpret_cast<const char*>(t.data.data()),
                t.data.size() * sizeof(float));
  }
  AppendU64(blob, PayloadChecksum());

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename bundle into place at " + path.string());
  }
}

ModelBundle ModelBundle::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open bundle " + path.string());
  const std::string blob((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (blob.size() < 20 || std::memcmp(blob.data(), kMagic, 4) != 0) {
    throw ValidationError("bundle " + path.string() + ": bad header");
  }
  const std::uint64_t manifest_len = ReadU64(blob, 4);
  if (manifest_len > blob.size() - 20) {
    throw ValidationError("bundle " + path.string() + ": truncated manifest");
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(blob.substr(12, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bundle " + path.string() +
                          ": malformed manifest: " + e.what());
  }
  if (Require(manifest, "version").get<int>() != kFormatVersion) {
    throw ValidationError("bundle " + path.string() +
                          ": unsupported format version");
  }
  ModelBundle bundle;
  bundle.kind = Require(manifest, "kind").get<std::string>();
  bundle.metadata = manifest.value("metadata", nlohmann::json::object());

  std::size_t offset = 12 + manifest_len;
  const std::size_t payload_end = blob.size() - 8;
  for (const auto& entry : Require(manifest, "tensors")) {
    BundleTensor t;
    t.name = Require(entry, "name").get<std::string>();
    t.shape = Require(entry, "shape").get<std::vector<int>>();
    const std::size_t bytes = ShapeCount(t.shape) * sizeof(float);
    if (offset + bytes > payload_end) {
      throw ValidationError("bundle " + path.string() + ": payload of " +
                            t.name + " is truncated");
    }
    t.data.resize(ShapeCount(t.shape));
    std::memcpy(t.data.data(), blob.data() + offset, bytes);
    offset += bytes;
    bundle.tensors.push_back(std::move(t));
  }
  if (offset != payload_end) {
    throw ValidationError("bundle " + path.string() +
                          ": payload size does not match manifest");
  }
  if (ReadU64(blob, payload_end) != bundle.PayloadChecksum()) {
    throw ValidationError("bundle " + path.string() + ": checksum mismatch");
  }
  return bundle;
}

template <typename T>
ModelBundle BundleFromParams(const std::string& kind,
                             const nn::ParamSet<T>& params) {
  ModelBundle bundle;
  bundle.kind = kind;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const nn::Tensor<T>& v = params[i].value;
    BundleTensor t;
    t.name = params[i].name;
    t.shape = {v.channels(), v.height(), v.width()};
    t.data.assign(v.data(), v.data() + v.size());
    bundle.tensors.push_back(std::move(t));
  }
  return bundle;
}

template <typename T>
void LoadParams(const ModelBundle& bundle, nn::ParamSet<T>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    nn::Parameter<T>& p = params[i];
    const BundleTensor* t = bundle.Find(p.name);
    if (!t) throw ValidationError("bundle lacks tensor " + p.name);
    if (t->shape != std::vector<int>{p.value.channels(), p.value.height(),
                                     p.value.width()}) {
      throw ValidationError("bundle tensor " + p.name +
                            " has shape incompatible with " +
                            p.value.ShapeString());
    }
    std::copy(t->data.begin(), t->data.end(), p.value.data());
  }
}

template ModelBundle BundleFromParams<float>(const std::string&,
                                             const nn::ParamSet<float>&);
template ModelBundle BundleFromParams<double>(const std::string&,
                                              const nn::ParamSet<double>&);
template void LoadParams<float>(const ModelBundle&, nn::ParamSet<float>&);
template void LoadParams<double>(const ModelBundle&, nn::ParamSet<double>&);

nlohmann::json MifOptionsToJson(const MifNetOptions& o) {
  return {{"num_refs", o.num_refs},
          {"shared_mc", o.shared_mc},
          {"mc_channels", o.mc.channels},
          {"full_scale_path", o.mc.full_scale_path},
          {"absolute_full_scale", o.mc.absolute_full_scale},
          {"guided_out", o.guided_out},
          {"growth", o.growth}};
}

MifNetOptions MifOptionsFromJson(const nlohmann::json& j) {
  MifNetOptions o;
  o.num_refs = j.value("num_refs", o.num_refs);
  o.shared_mc = j.value("shared_mc", o.shared_mc);
  o.mc.channels = j.value("mc_channels", o.mc.channels);
  o.mc.full_scale_path = j.value("full_scale_path", o.mc.full_scale_path);
  o.mc.absolute_full_scale =
      j.value("absolute_full_scale", o.mc.absolute_full_scale);
  o.guided_out = j.value("guided_out", o.guided_out);
  o.growth = j.value("growth", o.growth);
  return o;
}

ModelBundle MakeMifBundle(const MifNet<float>& net, int qp) {
  ModelBundle b = BundleFromParams("mif", net.params());
  b.metadata["num_refs"] = net.options().num_refs;
  b.metadata["qp"] = qp;
  b.metadata["options"] = MifOptionsToJson(net.options());
  return b;
}

MifNet<float> LoadMifNet(const ModelBundle& bundle) {
  if (bundle.kind != "mif") {
    throw ValidationError("expected a mif bundle, got '" + bundle.kind + "'");
  }
  MifNet<float> net(
      MifOptionsFromJson(bundle.metadata.value("options", nlohmann::json{})));
  LoadParams(bundle, net.params());
  return net;
}

ModelBundle MakeIfBundle(const IfNet<float>& net, int qp) {
  ModelBundle b = BundleFromParams("if", net.params());
  b.metadata["qp"] = qp;
  b.metadata["options"] = {{"guided_out", net.options().guided_out},
                           {"growth", net.options().growth}};
  return b;
}

IfNet<float> LoadIfNet(const ModelBundle& bundle) {
  if (bundle.kind != "if") {
    throw ValidationError("expected an if bundle, got '" + bundle.kind + "'");
  }
  IfNetOptions o;
  const nlohmann::json opts =
      bundle.metadata.value("options", nlohmann::json::object());
  o.guided_out = opts.value("guided_out", o.guided_out);
  o.growth = opts.value("growth", o.growth);
  IfNet<float> net(o);
  LoadParams(bundle, net.params());
  return net;
}

ModelBundle MakeRfsBundle(const RfsNetParams& params) {
  ModelBundle b;
  b.kind = "rfs";
  const std::vector<double> flat = params.Flatten();
  b.tensors.push_back({"rfs.params",
                       {static_cast<int>(flat.size())},
                       std::vector<float>(flat.begin(), flat.end())});
  return b;
}

RfsNetParams LoadRfsParams(const ModelBundle& bundle) {
  if (bundle.kind != "rfs") {
    throw ValidationError("expected an rfs bundle, got '" + bundle.kind + "'");
  }
  const BundleTensor* t = bundle.Find("rfs.params");
  if (!t || t->data.size() != RfsNetParams::kCount) {
    throw ValidationError("rfs bundle has no parameter vector of length " +
                          std::to_string(RfsNetParams::kCount));
  }
  const std::vector<double> flat(t->data.begin(), t->data.end());
  return RfsNetParams::Unflatten(flat);
}

}  // namespace mif
