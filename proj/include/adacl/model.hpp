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

#ifndef ADACL_MODEL_HPP_
#define ADACL_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adacl/layers.hpp"
#include "adacl/rng.hpp"
#include "adacl/tape.hpp"

namespace adacl {

inline constexpr std::size_t kInputSide = 32;
inline constexpr std::size_t kEmbeddingSize = 64;
inline constexpr std::size_t kParameterBudget = 300'000;

struct NamedLayer {
  std::string name;
  LayerSpec spec;
};

/// The regressor: three conv/relu/pool stages (32, 64, 128 channels), global
/// average pooling, a 64-unit hidden layer and a single linear output.
std::vector<NamedLayer> architecture(std::size_t channels);

/// "conv1.weight", "conv1.bias", ... in build order.
std::vector<std::string> parameter_names(std::size_t channels);
std::vector<Shape> parameter_shapes(std::size_t channels);

/// Parameter tensors of the regressor in build order.
template <typename T>
class ModelParams {
 public:
  ModelParams(std::size_t channels, std::vector<Tensor<T>> tensors);

  std::size_t channels() const noexcept { return channels_; }
  std::vector<Tensor<T>>& tensors() noexcept { return tensors_; }
  const std::vector<Tensor<T>>& tensors() const noexcept { return tensors_; }
  std::size_t parameter_count() const;
  bool all_finite() const;

  template <typename U>
  ModelParams<U> cast() const {
    std::vector<Tensor<U>> out;
    out.reserve(tensors_.size());
    for (const auto& t : tensors_) out.push_back(t.template cast<U>());
    return ModelParams<U>(channels_, std::move(out));
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::size_t channels_;
  std::vector<Tensor<T>> tensors_;
};

/// Weights uniform in +-sqrt(6 / fan_in), biases zero.
template <typename T>
ModelParams<T> build_model(std::size_t channels, RngStream& rng);

/// All parameters zero; handy for constructing fixtures.
template <typename T>
ModelParams<T> zero_model(std::size_t channels);

struct ForwardNodes {
  NodeId raw_score;  // [N, 1]
  NodeId embedding;  // [N, 64], post-relu hidden layer
  std::vector<NodeId> params;
};

/// Records the network on `tape` for an [N, C, 32, 32] input node. With
/// `trainable` the parameters are gradient leaves, otherwise constants.
template <typename T>
ForwardNodes forward(Tape<T>& tape, const ModelParams<T>& params,
                     NodeId input, bool trainable);

/// Unclamped network output per image of an [N, C, 32, 32] batch.
template <typename T>
std::vector<T> raw_scores(const ModelParams<T>& params, const Tensor<T>& batch);

/// Single image, [C, 32, 32] or [1, C, 32, 32].
template <typename T>
T raw_score(const ModelParams<T>& params, const Tensor<T>& image);

template <typename T>
T clamp_score(T raw) {
  return std::clamp(raw, T{0}, T{1});
}

/// clamp(raw_score, 0, 1); larger is more anomalous.
template <typename T>
T anomaly_score(const ModelParams<T>& params, const Tensor<T>& image) {
  return clamp_score(raw_score(params, image));
}

/// [N, 64] hidden activations for an [N, C, 32, 32] batch.
template <typename T>
Tensor<T> embed_batch(const ModelParams<T>& params, const Tensor<T>& batch);

template <typename T>
std::vector<T> embed(const ModelParams<T>& params, const Tensor<T>& image);

/// Checkpoint layout: magic "ADACL001", u32 channels, u32 tensor count,
/// per tensor u32 rank and u32 extents, then float32 data in build order.
/// All integers and floats little-endian.
void write_checkpoint(std::ostream& out, const ModelParams<float>& params);
ModelParams<float> read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const ModelParams<float>& params);
ModelParams<float> load_checkpoint(const std::string& path);

extern template class ModelParams<float>;
extern template class ModelParams<double>;

}  // namespace adacl

#endif  // ADACL_MODEL_HPP_
