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

#include "mif/nn/graph.h"

#include <stdexcept>

namespace mif::nn {

template <typename T>
Var Graph<T>::Constant(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Var Graph<T>::Variable(Tensor<T> value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = grad_enabled_;
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Var Graph<T>::Param(Parameter<T>& p) {
  Node n;
  n.param = &p;
  n.requires_grad = grad_enabled_;
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
const Tensor<T>& Graph<T>::value(Var v) const {
  const Node& n = nodes_[v.id];
  return n.param ? n.param->value : n.value;
}

template <typename T>
const Tensor<T>* Graph<T>::grad(Var v) const {
  const Node& n = nodes_[v.id];
  return n.grad.empty() ? nullptr : &n.grad;
}

template <typename T>
Var Graph<T>::Record(Tensor<T> value, std::initializer_list<Var> inputs,
                     BackwardFn backward) {
  return Record(std::move(value), std::vector<Var>(inputs),
                std::move(backward));
}

template <typename T>
Var Graph<T>::Record(Tensor<T> value, const std::vector<Var>& inputs,
                     BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  if (grad_enabled_) {
    for (Var in : inputs) n.requires_grad |= nodes_[in.id].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Tensor<T>& Graph<T>::GradRef(Var v) {
  Node& n = nodes_[v.id];
  if (n.grad.empty()) {
    const Tensor<T>& val = value(v);
    n.grad = Tensor<T>(val.channels(), val.height(), val.width());
  }
  return n.grad;
}

template <typename T>
void Graph<T>::Backward(Var root) {
  if (!grad_enabled_) throw std::logic_error("backward on a no-grad graph");
  if (value(root).size() != 1) {
    throw std::logic_error("backward root must be a scalar");
  }
  GradRef(root)[0] = T(1);
  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) {
      n.backward(*this, id);
    } else if (n.param) {
      T* dst = n.param->grad.data();
      const T* src = n.grad.data();
      for (std::size_t i = 0; i < n.grad.size(); ++i) dst[i] += src[i];
    }
  }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace mif::nn
