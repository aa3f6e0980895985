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

#ifndef MIF_DCT_H_
#define MIF_DCT_H_

#include <span>
#include <vector>

namespace mif {

// Orthonormal n-point type-II DCT basis, row k = frequency k.
std::vector<double> DctMatrix(int n);

// In-place separable 2-D transforms of an n x n row-major block.
void ForwardDct2d(std::span<double> block, int n);
void InverseDct2d(std::span<double> block, int n);

}  // namespace mif

#endif  // MIF_DCT_H_
