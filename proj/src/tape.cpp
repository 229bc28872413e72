// Copyright 2026 The ADACL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adacl/tape.hpp"

#include <optional>
#include <sstream>

namespace adacl {

std::string to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  Tensor<T> out = x;
  for (T& v : out.data()) v = sigmoid(v);
  return out;
}

template <typename T>
Tensor<T> sigmoid_derivative(const Tensor<T>& x) {
  Tensor<T> out = x;
  for (T& v : out.data()) {
    const T h = sigmoid(v);
    v = h * (T{1} - h);
  }
  return out;
}

template Tensor<float> sigmoid(const Tensor<float>&);
template Tensor<double> sigmoid(const Tensor<double>&);
template Tensor<float> sigmoid_derivative(const Tensor<float>&);
template Tensor<double> sigmoid_derivative(const Tensor<double>&);

template <typename T>
const Tensor<T>& GradientSet<T>::of(NodeId node) const {
  for (std::size_t k = 0; k < parameters_.size(); ++k) {
    if (parameters_[k] == node) return grads_[k];
  }
  throw Error("gradient set: node " + std::to_string(node) +
              " is not a parameter");
}

template <typename T>
NodeId Tape<T>::parameter(Tensor<T> value) {
  nodes_.push_back(Node{std::move(value), {}, {}, true});
  parameters_.push_back(nodes_.size() - 1);
  return nodes_.size() - 1;
}

template <typename T>
NodeId Tape<T>::constant(Tensor<T> value) {
  nodes_.push_back(Node{std::move(value), {}, {}, false});
  return nodes_.size() - 1;
}

template <typename T>
NodeId Tape<T>::record(Tensor<T> value, std::vector<NodeId> inputs,
                       BackwardFn backward) {
  bool requires_grad = false;
  for (NodeId in : inputs) {
    if (in >= nodes_.size()) {
      throw Error("tape: input node " + std::to_string(in) +
                  " is not recorded yet");
    }
    requires_grad = requires_grad || nodes_[in].requires_grad;
  }
  nodes_.push_back(
      Node{std::move(value), std::move(inputs), std::move(backward),
           requires_grad});
  return nodes_.size() - 1;
}

template <typename T>
GradientSet<T> Tape<T>::backward(NodeId loss, T seed) const {
  if (nodes_.empty()) throw Error("tape: backward on an empty tape");
  if (loss >= nodes_.size()) {
    throw Error("tape: loss node " + std::to_string(loss) + " out of range");
  }
  if (nodes_[loss].value.size() != 1) {
    throw ShapeError("tape: backward needs a scalar loss, got shape " +
                     to_string(nodes_[loss].value.shape()));
  }

  std::vector<std::optional<Tensor<T>>> grads(loss + 1);
  grads[loss] = Tensor<T>(nodes_[loss].value.shape(), seed);

  std::vector<Tensor<T>*> grad_in;
  for (NodeId id = loss + 1; id-- > 0;) {
    const Node& node = nodes_[id];
    if (!grads[id] || !node.backward || !node.requires_grad) continue;
    grad_in.assign(node.inputs.size(), nullptr);
    for (std::size_t k = 0; k < node.inputs.size(); ++k) {
      const NodeId in = node.inputs[k];
      if (!nodes_[in].requires_grad) continue;
      if (!grads[in]) grads[in] = Tensor<T>(nodes_[in].value.shape());
      grad_in[k] = &*grads[in];
    }
    node.backward(*grads[id], grad_in);
    // Parameters keep their gradient; intermediates are released eagerly.
    if (!nodes_[id].inputs.empty()) grads[id].reset();
  }

  std::vector<Tensor<T>> out;
  out.reserve(parameters_.size());
  for (NodeId p : parameters_) {
    if (p < grads.size() && grads[p]) {
      out.push_back(std::move(*grads[p]));
    } else {
      out.emplace_back(nodes_[p].value.shape());
    }
  }
  return GradientSet<T>(parameters_, std::move(out));
}

template class GradientSet<float>;
template class GradientSet<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace adacl
