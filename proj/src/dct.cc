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

#include "mif/dct.h"

#include <cmath>
#include <map>
#include <numbers>

#include "mif/error.h"

namespace mif {
namespace {

const std::vector<double>& CachedMatrix(int n) {
  thread_local std::map<int, std::vector<double>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, DctMatrix(n)).first;
  return it->second;
}

// out = a * b or a^T * b for n x n row-major matrices.
void MatMul(const double* a, const double* b, double* out, int n,
            bool transpose_a) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double av = transpose_a ? a[k * n + i] : a[i * n + k];
        s += av * b[k * n + j];
      }
      out[i * n + j] = s;
    }
  }
}

void Transform(std::span<double> block, int n, bool inverse) {
  if (n <= 0 || block.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("dct: block size does not match n*n");
  }
  const std::vector<double>& c = CachedMatrix(n);
  std::vector<double> tmp(block.size()), ct(block.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ct[i * n + j] = c[j * n + i];
  }
  // Forward: C X C^T. Inverse: C^T Y C.
  if (!inverse) {
    MatMul(c.data(), block.data(), tmp.data(), n, false);
    MatMul(tmp.data(), ct.data(), block.data(), n, false);
  } else {
    MatMul(c.data(), block.data(), tmp.data(), n, true);
    MatMul(tmp.data(), c.data(), block.data(), n, false);
  }
}

}  // namespace

std::vector<double> DctMatrix(int n) {
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int i = 0; i < n; ++i) {
      m[k * n + i] =
          scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    }
  }
  return m;
}

void ForwardDct2d(std::span<double> block, int n) {
  Transform(block, n, false);
}

void InverseDct2d(std::span<double> block, int n) { Transform(block, n, true); }

}  // namespace mif
