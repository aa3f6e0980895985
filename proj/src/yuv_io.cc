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

#include "mif/yuv_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include "mif/error.h"

namespace mif {
namespace {

void CheckBitDepth(int bit_depth) {
  if (bit_depth != 8 && bit_depth != 10) {
    throw ConfigError("unsupported bit depth " + std::to_string(bit_depth) +
                      " (expected 8 or 10)");
  }
}

int SampleBytes(int bit_depth) { return bit_depth == 8 ? 1 : 2; }

int ToCode(double v, int max_code) {
  return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * max_code));
}

void ReadPlane(const std::vector<std::uint8_t>& bytes, std::size_t& offset,
               int bit_depth, Plane& plane) {
  const double max_code = (1 << bit_depth) - 1;
  for (double& s : plane.samples()) {
    int code;
    if (bit_depth == 8) {
      code = bytes[offset++];
    } else {
      code = bytes[offset] | (bytes[offset + 1] << 8);
      offset += 2;
    }
    s = code / max_code;
  }
}

void WritePlane(const Plane& plane, int bit_depth,
                std::vector<std::uint8_t>& out) {
  const int max_code = (1 << bit_depth) - 1;
  for (double s : plane.samples()) {
    const int code = ToCode(s, max_code);
    out.push_back(static_cast<std::uint8_t>(code & 0xff));
    if (bit_depth != 8) out.push_back(static_cast<std::uint8_t>(code >> 8));
  }
}

}  // namespace

std::size_t YuvFrameBytes(int width, int height, int bit_depth) {
  CheckBitDepth(bit_depth);
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  return (luma + 2 * (luma / 4)) * SampleBytes(bit_depth);
}

std::vector<Frame> ReadYuvSequence(const std::filesystem::path& path, int width,
                                   int height, int bit_depth, FrameRole role) {
  CheckBitDepth(bit_depth);
  if (width <= 0 || height <= 0 || width % 2 || height % 2) {
    throw ConfigError("frame dimensions must be positive and even");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const std::size_t frame_bytes = YuvFrameBytes(width, height, bit_depth);
  if (bytes.size() % frame_bytes != 0) {
    throw IoError(path.string() + ": size " + std::to_string(bytes.size()) +
                  " bytes is not a multiple of the expected frame size " +
                  std::to_string(frame_bytes) + " bytes");
  }
  std::vector<Frame> frames;
  std::size_t offset = 0;
  const int count = static_cast<int>(bytes.size() / frame_bytes);
  for (int k = 0; k < count; ++k) {
    Frame f = Frame::Blank(width, height, role, k);
    ReadPlane(bytes, offset, bit_depth, f.y);
    ReadPlane(bytes, offset, bit_depth, f.u);
    ReadPlane(bytes, offset, bit_depth, f.v);
    frames.push_back(std::move(f));
  }
  return frames;
}

void WriteYuvSequence(const std::filesystem::path& path,
                      const std::vector<Frame>& frames, int bit_depth) {
  CheckBitDepth(bit_depth);
  std::vector<std::uint8_t> bytes;
  for (const Frame& f : frames) {
    WritePlane(f.y, bit_depth, bytes);
    WritePlane(f.u, bit_depth, bytes);
    WritePlane(f.v, bit_depth, bytes);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Plane QuantizeToBitDepth(const Plane& plane, int bit_depth) {
  CheckBitDepth(bit_depth);
  const int max_code = (1 << bit_depth) - 1;
  Plane out = plane;
  for (double& s : out.samples()) {
    s = ToCode(s, max_code) / static_cast<double>(max_code);
  }
  return out;
}

}  // namespace mif
