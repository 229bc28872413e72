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

#include "adacl/model.hpp"

#include <cmath>

namespace adacl {
namespace {

void check_channels(std::size_t channels) {
  if (channels != 1 && channels != 3) {
    throw ConfigError("model: channels must be 1 or 3, got " +
                      std::to_string(channels));
  }
}

template <typename T>
Tensor<T> as_batch(const Tensor<T>& image) {
  if (image.rank() == 3) {
    Shape s = image.shape();
    s.insert(s.begin(), 1);
    return image.reshaped(s);
  }
  if (image.rank() == 4 && image.dim(0) == 1) return image;
  throw ShapeError("model: expected a [C, 32, 32] image, got " +
                   to_string(image.shape()));
}

template <typename T>
void check_input(const ModelParams<T>& params, const Shape& shape) {
  if (shape.size() != 4 || shape[1] != params.channels() ||
      shape[2] != kInputSide || shape[3] != kInputSide) {
    throw ShapeError("model: expected input [N, " +
                     std::to_string(params.channels()) + ", 32, 32], got " +
                     to_string(shape));
  }
}

}  // namespace

std::vector<NamedLayer> architecture(std::size_t channels) {
  check_channels(channels);
  return {
      {"conv1", Conv3x3{channels, 32}}, {"relu1", Relu{}},
      {"pool1", MaxPool2x2{}},          {"conv2", Conv3x3{32, 64}},
      {"relu2", Relu{}},                {"pool2", MaxPool2x2{}},
      {"conv3", Conv3x3{64, 128}},      {"relu3", Relu{}},
      {"pool3", MaxPool2x2{}},          {"gap", GlobalAvgPool{}},
      {"fc1", Dense{128, kEmbeddingSize}}, {"relu4", Relu{}},
      {"fc2", Dense{kEmbeddingSize, 1}},
  };
}

std::vector<std::string> parameter_names(std::size_t channels) {
  std::vector<std::string> names;
  for (const auto& layer : architecture(channels)) {
    if (parameter_shapes(layer.spec).empty()) continue;
    names.push_back(layer.name + ".weight");
    names.push_back(layer.name + ".bias");
  }
  return names;
}

std::vector<Shape> parameter_shapes(std::size_t channels) {
  std::vector<Shape> shapes;
  for (const auto& layer : architecture(channels)) {
    for (auto& s : parameter_shapes(layer.spec)) shapes.push_back(std::move(s));
  }
  return shapes;
}

template <typename T>
ModelParams<T>::ModelParams(std::size_t channels, std::vector<Tensor<T>> tensors)
    : channels_(channels), tensors_(std::move(tensors)) {
  const std::vector<Shape> expected = parameter_shapes(channels);
  if (tensors_.size() != expected.size()) {
    throw ShapeError("model: expected " + std::to_string(expected.size()) +
                     " parameter tensors, got " +
                     std::to_string(tensors_.size()));
  }
  const auto names = parameter_names(channels);
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (tensors_[k].shape() != expected[k]) {
      throw ShapeError("model: " + names[k] + " has shape " +
                       to_string(tensors_[k].shape()) + ", expected " +
                       to_string(expected[k]));
    }
  }
}

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t count = 0;
  for (const auto& t : tensors_) count += t.size();
  return count;
}

template <typename T>
bool ModelParams<T>::all_finite() const {
  for (const auto& t : tensors_) {
    if (!t.all_finite()) return false;
  }
  return true;
}

template <typename T>
ModelParams<T> zero_model(std::size_t channels) {
  std::vector<Tensor<T>> tensors;
  for (auto& shape : parameter_shapes(channels)) tensors.emplace_back(shape);
  return ModelParams<T>(channels, std::move(tensors));
}

template <typename T>
ModelParams<T> build_model(std::size_t channels, RngStream& rng) {
  ModelParams<T> params = zero_model<T>(channels);
  std::size_t k = 0;
  for (const auto& layer : architecture(channels)) {
    if (parameter_shapes(layer.spec).empty()) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in(layer.spec)));
    for (T& w : params.tensors()[k].data()) {
      w = static_cast<T>(rng.uniform(-limit, limit));
    }
    k += 2;  // bias stays zero
  }
  if (params.parameter_count() >= kParameterBudget) {
    throw ConfigError("model: " + std::to_string(params.parameter_count()) +
                      " parameters exceed the budget");
  }
  return params;
}

template <typename T>
ForwardNodes forward(Tape<T>& tape, const ModelParams<T>& params, NodeId input,
                     bool trainable) {
  check_input(params, tape.value(input).shape());
  ForwardNodes nodes;
  for (const auto& t : params.tensors()) {
    nodes.params.push_back(trainable ? tape.parameter(t) : tape.constant(t));
  }
  NodeId current = input;
  std::size_t k = 0;
  for (const auto& layer : architecture(params.channels())) {
    const std::size_t count = parameter_shapes(layer.spec).size();
    current = layer_forward(
        tape, layer.spec, current,
        std::span<const NodeId>(nodes.params).subspan(k, count), layer.name);
    k += count;
    if (layer.name == "relu4") nodes.embedding = current;
  }
  nodes.raw_score = current;
  return nodes;
}

template <typename T>
std::vector<T> raw_scores(const ModelParams<T>& params, const Tensor<T>& batch) {
  check_input(params, batch.shape());
  Tape<T> tape;
  const ForwardNodes nodes = forward(tape, params, tape.constant(batch), false);
  const auto out = tape.value(nodes.raw_score).data();
  return {out.begin(), out.end()};
}

template <typename T>
T raw_score(const ModelParams<T>& params, const Tensor<T>& image) {
  return raw_scores(params, as_batch(image)).front();
}

template <typename T>
Tensor<T> embed_batch(const ModelParams<T>& params, const Tensor<T>& batch) {
  check_input(params, batch.shape());
  Tape<T> tape;
  const ForwardNodes nodes = forward(tape, params, tape.constant(batch), false);
  return tape.value(nodes.embedding);
}

template <typename T>
std::vector<T> embed(const ModelParams<T>& params, const Tensor<T>& image) {
  const Tensor<T> out = embed_batch(params, as_batch(image));
  return {out.data().begin(), out.data().end()};
}

template class ModelParams<float>;
template class ModelParams<double>;

#define ADACL_INSTANTIATE_MODEL(T)                                            \
  template ModelParams<T> zero_model<T>(std::size_t);                         \
  template ModelParams<T> build_model<T>(std::size_t, RngStream&);            \
  template ForwardNodes forward(Tape<T>&, const ModelParams<T>&, NodeId,      \
                                bool);                                        \
  template std::vector<T> raw_scores(const ModelParams<T>&, const Tensor<T>&); \
  template T raw_score(const ModelParams<T>&, const Tensor<T>&);              \
  template Tensor<T> embed_batch(const ModelParams<T>&, const Tensor<T>&);    \
  template std::vector<T> embed(const ModelParams<T>&, const Tensor<T>&);

ADACL_INSTANTIATE_MODEL(float)
ADACL_INSTANTIATE_MODEL(double)
#undef ADACL_INSTANTIATE_MODEL

}  // namespace adacl
