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

#ifndef MIF_LOSSES_H_
#define MIF_LOSSES_H_

#include <vector>

#include "mif/frame.h"

namespace mif {

enum class TrainingPhase { kMcFirst, kGlobal };

struct LossWeights {
  double alpha = 0.99;
  double beta = 0.01;
  TrainingPhase phase = TrainingPhase::kMcFirst;

  static LossWeights ForPhase(TrainingPhase phase);
};

// Sum of squared per-pixel differences.
double SquaredL2(const Plane& a, const Plane& b);

// (1/M) sum_m ||compensated_m - urf||^2.
double LossIntermediate(const std::vector<Plane>& compensated,
                        const Plane& urf);

// ||enhanced - raw||^2.
double LossGlobal(const Plane& enhanced, const Plane& raw);

// alpha * l_int + beta * l_glo.
double LossTotal(double l_int, double l_glo, const LossWeights& weights);

}  // namespace mif

#endif  // MIF_LOSSES_H_
