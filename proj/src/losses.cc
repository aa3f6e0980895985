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

#include "mif/losses.h"

#include "mif/error.h"

namespace mif {

LossWeights LossWeights::ForPhase(TrainingPhase phase) {
  if (phase == TrainingPhase::kMcFirst) return {0.99, 0.01, phase};
  return {0.01, 0.99, phase};
}

double SquaredL2(const Plane& a, const Plane& b) {
  if (!a.SameShape(b)) throw ValidationError("squared l2: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sum += d * d;
  }
  return sum;
}

double LossIntermediate(const std::vector<Plane>& compensated,
                        const Plane& urf) {
  if (compensated.empty()) {
    throw ValidationError("intermediate loss: no compensated planes");
  }
  double sum = 0.0;
  for (const Plane& c : compensated) sum += SquaredL2(c, urf);
  return sum / static_cast<double>(compensated.size());
}

double LossGlobal(const Plane& enhanced, const Plane& raw) {
  return SquaredL2(enhanced, raw);
}

double LossTotal(double l_int, double l_glo, const LossWeights& weights) {
  return weights.alpha * l_int + weights.beta * l_glo;
}

}  // namespace mif
