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

#ifndef MIF_ADAM_H_
#define MIF_ADAM_H_

#include <span>
#include <vector>

#include "mif/nn/params.h"

namespace mif {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One Adam update at step t (1-based) on a flat parameter array:
//   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
//   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
template <typename T>
void AdamUpdate(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, long step, const AdamOptions& options);

// Adam state for every tensor of a parameter set.
template <typename T>
class AdamOptimizer {
 public:
  AdamOptimizer(nn::ParamSet<T>& params, const AdamOptions& options);

  // Applies the gradients currently stored in the parameter set.
  void Step();
  long step_count() const { return step_; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }

 private:
  nn::ParamSet<T>& params_;
  AdamOptions options_;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
  long step_ = 0;
};

}  // namespace mif

#endif  // MIF_ADAM_H_
