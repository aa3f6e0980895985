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

#ifndef MIF_NN_GRAPH_H_
#define MIF_NN_GRAPH_H_

#include <functional>
#include <initializer_list>
#include <vector>

#include "mif/nn/params.h"
#include "mif/nn/tensor.h"

namespace mif::nn {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Tape for one forward evaluation. Ops append nodes in evaluation order;
// Backward() walks them in reverse and accumulates parameter gradients into
// Parameter::grad.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int node)>;

  explicit Graph(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  bool grad_enabled() const { return grad_enabled_; }

  Var Constant(Tensor<T> value);
  // Leaf whose gradient is kept (used for input-gradient probes).
  Var Variable(Tensor<T> value);
  Var Param(Parameter<T>& p);

  const Tensor<T>& value(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  // Gradient that reached `v` during Backward(), or nullptr.
  const Tensor<T>* grad(Var v) const;

  // Op authoring interface.
  Var Record(Tensor<T> value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(Tensor<T> value, const std::vector<Var>& inputs,
             BackwardFn backward);
  // Zero-initialized on first access.
  Tensor<T>& GradRef(Var v);
  const Tensor<T>& OutputGrad(int node) const { return nodes_[node].grad; }

  // `root` must hold a single element.
  void Backward(Var root);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> value;
    Parameter<T>* param = nullptr;
    Tensor<T> grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  bool grad_enabled_;
  std::vector<Node> nodes_;
};

}  // namespace mif::nn

#endif  // MIF_NN_GRAPH_H_
