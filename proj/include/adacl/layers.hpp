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

#ifndef ADACL_LAYERS_HPP_
#define ADACL_LAYERS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adacl/tape.hpp"

namespace adacl {

// Activations use NCHW layout; dense layers take [N, features].

/// 3x3 convolution, stride 1, zero padding 1. Weights [out, in, 3, 3].
struct Conv3x3 {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
};
/// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
struct MaxPool2x2 {};
struct Relu {};
/// [N, C, H, W] -> [N, C].
struct GlobalAvgPool {};
/// Fully connected layer. Weights [out, in].
struct Dense {
  std::size_t in_features = 0;
  std::size_t out_features = 0;
};

using LayerSpec = std::variant<Conv3x3, MaxPool2x2, Relu, GlobalAvgPool, Dense>;

std::string describe(const LayerSpec& layer);
/// Weight shape followed by bias shape; empty for parameter-free layers.
std::vector<Shape> parameter_shapes(const LayerSpec& layer);
/// Inputs feeding one output unit; 0 for parameter-free layers.
std::size_t fan_in(const LayerSpec& layer);

/// Validates `input` against the layer's declared shape, then records the
/// layer on the tape. `name` is used in error messages only.
template <typename T>
NodeId layer_forward(Tape<T>& tape, const LayerSpec& layer, NodeId input,
                     std::span<const NodeId> params,
                     std::string_view name = {});

namespace ops {

template <typename T>
NodeId conv3x3(Tape<T>& tape, NodeId x, NodeId weight, NodeId bias);
template <typename T>
NodeId max_pool2x2(Tape<T>& tape, NodeId x);
template <typename T>
NodeId relu(Tape<T>& tape, NodeId x);
template <typename T>
NodeId global_avg_pool(Tape<T>& tape, NodeId x);
template <typename T>
NodeId dense(Tape<T>& tape, NodeId x, NodeId weight, NodeId bias);
template <typename T>
NodeId add(Tape<T>& tape, NodeId a, NodeId b);

/// Mean of squared differences.
template <typename T>
NodeId mse_loss(Tape<T>& tape, NodeId pred, NodeId target);
/// Mean binary cross-entropy of sigmoid(logit) against targets in [0, 1].
template <typename T>
NodeId bce_loss(Tape<T>& tape, NodeId logit, NodeId target);

}  // namespace ops
}  // namespace adacl

#endif  // ADACL_LAYERS_HPP_
