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

#ifndef ADACL_TAPE_HPP_
#define ADACL_TAPE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adacl/tensor.hpp"

namespace adacl {

using NodeId = std::size_t;

/// One gradient per registered parameter, in registration order.
template <typename T>
class GradientSet {
 public:
  GradientSet(std::vector<NodeId> parameters, std::vector<Tensor<T>> grads)
      : parameters_(std::move(parameters)), grads_(std::move(grads)) {}

  std::size_t size() const noexcept { return grads_.size(); }
  const Tensor<T>& operator[](std::size_t k) const { return grads_[k]; }
  /// Gradient of the parameter registered as `node`.
  const Tensor<T>& of(NodeId node) const;
  std::span<const NodeId> parameters() const noexcept { return parameters_; }
  std::vector<Tensor<T>>& tensors() noexcept { return grads_; }
  const std::vector<Tensor<T>>& tensors() const noexcept { return grads_; }

 private:
  std::vector<NodeId> parameters_;
  std::vector<Tensor<T>> grads_;
};

/// Records a forward pass for reverse-mode differentiation. Nodes are
/// appended in evaluation order, so the node list is always topologically
/// sorted. Not thread-safe; use one tape per thread.
template <typename T>
class Tape {
 public:
  /// Accumulates (+=) the input gradients given the output gradient. Entries
  /// of `grad_in` are null for inputs that do not require a gradient.
  using BackwardFn = std::function<void(const Tensor<T>& grad_out,
                                        std::span<Tensor<T>* const> grad_in)>;

  /// Leaf whose gradient is reported by backward().
  NodeId parameter(Tensor<T> value);
  /// Leaf without gradient (inputs, targets).
  NodeId constant(Tensor<T> value);
  NodeId record(Tensor<T> value, std::vector<NodeId> inputs,
                BackwardFn backward);

  const Tensor<T>& value(NodeId id) const { return nodes_.at(id).value; }
  bool requires_grad(NodeId id) const { return nodes_.at(id).requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  std::span<const NodeId> parameters() const noexcept { return parameters_; }

  /// Propagates `seed` * d(loss)/d(node) back to every parameter. `loss`
  /// must hold a single element. Parameters not reached get zero gradients.
  GradientSet<T> backward(NodeId loss, T seed = T{1}) const;

 private:
  struct Node {
    Tensor<T> value;
    std::vector<NodeId> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  std::vector<NodeId> parameters_;
};

extern template class GradientSet<float>;
extern template class GradientSet<double>;
extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace adacl

#endif  // ADACL_TAPE_HPP_
