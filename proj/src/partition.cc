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

#include "mif/partition.h"

#include <bit>
#include <fstream>
#include <string>

#include "json.hpp"
#include "mif/error.h"

namespace mif {
namespace {

std::string Describe(const Rect& r) {
  return "[" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
         std::to_string(r.w) + "," + std::to_string(r.h) + "]";
}

bool ValidSide(int s) {
  return s >= 4 && s <= 64 && std::has_single_bit(static_cast<unsigned>(s));
}

void RasterizeLevel(const std::vector<Rect>& rects, Plane& map) {
  for (const Rect& r : rects) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        const bool edge =
            x == r.x || y == r.y || x == r.x + r.w - 1 || y == r.y + r.h - 1;
        map.at(x, y) = edge ? 1.0 : -1.0;
      }
    }
  }
}

nlohmann::json RectsToJson(const std::vector<Rect>& rects) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rect& r : rects) arr.push_back({r.x, r.y, r.w, r.h});
  return arr;
}

std::vector<Rect> RectsFromJson(const nlohmann::json& arr) {
  std::vector<Rect> rects;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 4) {
      throw IoError("partition sidecar: rectangle must be [x,y,w,h]");
    }
    rects.push_back(
        {e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
  }
  return rects;
}

}  // namespace

void ValidateTiling(const std::vector<Rect>& rects, int width, int height) {
  std::vector<int> owner(static_cast<std::size_t>(width) * height, -1);
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const Rect& r = rects[i];
    if (!ValidSide(r.w) || !ValidSide(r.h)) {
      throw ValidationError("block " + Describe(r) +
                            " has a side outside the powers of two 4..64");
    }
    if (r.x < 0 || r.y < 0 || r.x + r.w > width || r.y + r.h > height) {
      throw ValidationError("block " + Describe(r) + " exceeds the " +
                            std::to_string(width) + "x" +
                            std::to_string(height) + " frame");
    }
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        int& o = owner[static_cast<std::size_t>(y) * width + x];
        if (o >= 0) {
          throw ValidationError("overlap at pixel (" + std::to_string(x) + "," +
                                std::to_string(y) + ") between " +
                                Describe(rects[o]) + " and " + Describe(r));
        }
        o = static_cast<int>(i);
      }
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (owner[static_cast<std::size_t>(y) * width + x] < 0) {
        throw ValidationError("gap at pixel (" + std::to_string(x) + "," +
                              std::to_string(y) + ")");
      }
    }
  }
}

PartitionMaps RasterizePartition(const BlockLayout& layout, int width,
                                 int height) {
  ValidateTiling(layout.cu, width, height);
  ValidateTiling(layout.tu, width, height);
  PartitionMaps maps{Plane(width, height, -1.0), Plane(width, height, -1.0)};
  RasterizeLevel(layout.cu, maps.cu);
  RasterizeLevel(layout.tu, maps.tu);
  return maps;
}

std::vector<BlockLayout> ReadPartitionSidecar(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw IoError(path.string() + ": top level must be an array");
  }
  std::vector<BlockLayout> layouts;
  for (const auto& entry : doc) {
    if (!entry.contains("cu") || !entry.contains("tu")) {
      throw IoError(path.string() + ": entry lacks \"cu\" or \"tu\"");
    }
    layouts.push_back({RectsFromJson(entry["cu"]), RectsFromJson(entry["tu"])});
  }
  return layouts;
}

void WritePartitionSidecar(const std::filesystem::path& path,
                           const std::vector<BlockLayout>& layouts) {
  nlohmann::json doc = nlohmann::json::array();
  for (const BlockLayout& l : layouts) {
    doc.push_back({{"cu", RectsToJson(l.cu)}, {"tu", RectsToJson(l.tu)}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump() << "\n";
}

}  // namespace mif
