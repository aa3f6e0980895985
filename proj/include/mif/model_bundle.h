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

#ifndef MIF_MODEL_BUNDLE_H_
#define MIF_MODEL_BUNDLE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mif/filters.h"
#include "mif/nn/params.h"
#include "mif/rfs.h"

namespace mif {

struct BundleTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> data;
};

// Named parameter container. On disk:
//   "MIFB" | u64 LE manifest length | manifest (UTF-8 JSON)
//   | payload: f32 LE tensors in manifest order | u64 LE FNV-1a of payload
struct ModelBundle {
  std::string kind;  // "mif", "if" or "rfs"
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<BundleTensor> tensors;

  const BundleTensor* Find(const std::string& name) const;
  std::size_t ElementCount() const;
  std::uint64_t PayloadChecksum() const;
  nlohmann::json Manifest() const;

  // Writes to a temporary file in the same directory, then renames.
  void Save(const std::filesystem::path& path) const;
  static ModelBundle Load(const std::filesystem::path& path);
};

std::uint64_t Fnv1a64(const std::uint8_t* data, std::size_t size);

template <typename T>
ModelBundle BundleFromParams(const std::string& kind,
                             const nn::ParamSet<T>& params);
// Copies every parameter of `params` from the bundle; names and element
// counts must match.
template <typename T>
void LoadParams(const ModelBundle& bundle, nn::ParamSet<T>& params);

ModelBundle MakeMifBundle(const MifNet<float>& net, int qp);
MifNet<float> LoadMifNet(const ModelBundle& bundle);
ModelBundle MakeIfBundle(const IfNet<float>& net, int qp);
IfNet<float> LoadIfNet(const ModelBundle& bundle);
ModelBundle MakeRfsBundle(const RfsNetParams& params);
RfsNetParams LoadRfsParams(const ModelBundle& bundle);

nlohmann::json MifOptionsToJson(const MifNetOptions& o);
MifNetOptions MifOptionsFromJson(const nlohmann::json& j);

}  // namespace mif

#endif  // MIF_MODEL_BUNDLE_H_
