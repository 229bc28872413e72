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

#ifndef ADACL_TESTS_LAYER_CHECKS_HPP_
#define ADACL_TESTS_LAYER_CHECKS_HPP_

#include <string>
#include <vector>

#include "adacl/layers.hpp"
#include "adacl/rng.hpp"
#include "gradcheck.hpp"

namespace adacl::testing {

struct LayerCheck {
  std::string name;
  std::size_t shapes = 0;
  std::size_t entries = 0;
  double max_error = 0.0;
  std::string worst{};
};

namespace detail {

inline std::size_t pick(RngStream& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<long>(lo),
                                              static_cast<long>(hi)));
}

inline void merge(LayerCheck& check, const GradCheckResult& r,
                  const std::string& shape) {
  ++check.shapes;
  check.entries += r.checked;
  if (r.max_error >= check.max_error) {
    check.max_error = r.max_error;
    check.worst = shape + " " + r.worst;
  }
}

// mse(layer(x), target) with x (and the layer parameters) as leaves.
inline GradCheckResult check_layer(const LayerSpec& layer, Tensor<double> x,
                                   RngStream& rng) {
  std::vector<Tensor<double>> leaves{std::move(x)};
  for (const Shape& s : parameter_shapes(layer))
    leaves.push_back(random_tensor(s, rng));
  Tensor<double> target;
  {
    Tape<double> probe;
    std::vector<NodeId> ids;
    for (const auto& l : leaves) ids.push_back(probe.constant(l));
    const NodeId out = layer_forward(
        probe, layer, ids[0], std::span<const NodeId>(ids).subspan(1));
    target = random_tensor(probe.value(out).shape(), rng);
  }
  return check_gradients(
      std::move(leaves), [&](Tape<double>& tape, std::span<const NodeId> ids) {
        const NodeId out = layer_forward(tape, layer, ids[0], ids.subspan(1));
        return ops::mse_loss(tape, out, tape.constant(target));
      });
}

}  // namespace detail

/// Finite-difference checks of every layer kind and both losses over
/// `shapes` random shapes each (64-bit, step 1e-3).
inline std::vector<LayerCheck> run_layer_gradient_checks(std::uint64_t seed,
                                                         std::size_t shapes) {
  using detail::pick;
  RngStream rng(seed);
  std::vector<LayerCheck> out;

  LayerCheck conv{"conv3x3"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const std::size_t n = pick(rng, 1, 2), c = pick(rng, 1, 3),
                      o = pick(rng, 1, 4), h = pick(rng, 1, 6),
                      w = pick(rng, 1, 6);
    detail::merge(conv,
                  detail::check_layer(Conv3x3{c, o},
                                      random_tensor({n, c, h, w}, rng), rng),
                  to_string({n, c, h, w}) + "->" + std::to_string(o));
  }
  out.push_back(conv);

  LayerCheck dense{"dense"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const std::size_t n = pick(rng, 1, 4), in = pick(rng, 1, 10),
                      o = pick(rng, 1, 6);
    detail::merge(dense,
                  detail::check_layer(Dense{in, o},
                                      random_tensor({n, in}, rng), rng),
                  to_string({n, in}) + "->" + std::to_string(o));
  }
  out.push_back(dense);

  LayerCheck relu{"relu"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const Shape s{pick(rng, 1, 3), pick(rng, 1, 3), pick(rng, 1, 5),
                  pick(rng, 1, 5)};
    detail::merge(relu,
                  detail::check_layer(Relu{}, kink_free_tensor(s, rng), rng),
                  to_string(s));
  }
  out.push_back(relu);

  LayerCheck pool{"max_pool2x2"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const Shape s{pick(rng, 1, 3), pick(rng, 1, 3), pick(rng, 2, 7),
                  pick(rng, 2, 7)};
    detail::merge(pool,
                  detail::check_layer(MaxPool2x2{}, distinct_tensor(s, rng),
                                      rng),
                  to_string(s));
  }
  out.push_back(pool);

  LayerCheck gap{"global_avg_pool"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const Shape s{pick(rng, 1, 3), pick(rng, 1, 4), pick(rng, 1, 5),
                  pick(rng, 1, 5)};
    detail::merge(gap,
                  detail::check_layer(GlobalAvgPool{}, random_tensor(s, rng),
                                      rng),
                  to_string(s));
  }
  out.push_back(gap);

  LayerCheck mse{"mse_loss"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const Shape s{pick(rng, 1, 16), 1};
    std::vector<Tensor<double>> leaves{random_tensor(s, rng),
                                       random_tensor(s, rng, 0.0, 1.0)};
    detail::merge(
        mse,
        check_gradients(std::move(leaves),
                        [](Tape<double>& tape, std::span<const NodeId> ids) {
                          return ops::mse_loss(tape, ids[0], ids[1]);
                        }),
        to_string(s));
  }
  out.push_back(mse);

  LayerCheck bce{"bce_loss"};
  for (std::size_t i = 0; i < shapes; ++i) {
    const Shape s{pick(rng, 1, 16), 1};
    const Tensor<double> target = random_tensor(s, rng, 0.0, 1.0);
    detail::merge(
        bce,
        check_gradients({random_tensor(s, rng, -3.0, 3.0)},
                        [&](Tape<double>& tape, std::span<const NodeId> ids) {
                          return ops::bce_loss(tape, ids[0],
                                               tape.constant(target));
                        }),
        to_string(s));
  }
  out.push_back(bce);
  return out;
}

}  // namespace adacl::testing

#endif  // ADACL_TESTS_LAYER_CHECKS_HPP_
