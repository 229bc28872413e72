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

#include "adacl/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>

namespace adacl {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

[[noreturn]] void shape_error(std::string_view op, const std::string& what) {
  throw ShapeError(std::string(op) + ": " + what);
}

void require_rank(std::string_view op, const Shape& shape, std::size_t rank) {
  if (shape.size() != rank) {
    shape_error(op, "expected rank " + std::to_string(rank) + ", got shape " +
                        to_string(shape));
  }
}

// Unfolds a zero-padded [N, C, H, W] batch into [C*9, N*H*W] columns.
template <typename T>
void im2col(const T* x, std::size_t n, std::size_t c, std::size_t h,
            std::size_t w, T* cols) {
  const std::size_t hw = h * w;
  const std::size_t stride = n * hw;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        T* row = cols + ((ch * 3 + ky) * 3 + kx) * stride;
        const std::size_t x_lo = kx == 0 ? 1 : 0;
        const std::size_t x_hi = kx == 2 ? w - 1 : w;
        for (std::size_t img = 0; img < n; ++img) {
          const T* plane = x + (img * c + ch) * hw;
          T* dst = row + img * hw;
          for (std::size_t y = 0; y < h; ++y) {
            T* out = dst + y * w;
            const long iy = static_cast<long>(y + ky) - 1;
            if (iy < 0 || iy >= static_cast<long>(h)) {
              std::fill(out, out + w, T{0});
              continue;
            }
            const T* in = plane + static_cast<std::size_t>(iy) * w;
            if (x_lo) out[0] = T{0};
            if (x_hi < w) out[w - 1] = T{0};
            for (std::size_t xx = x_lo; xx < x_hi; ++xx) out[xx] = in[xx + kx - 1];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatters column gradients back onto the input batch.
template <typename T>
void col2im_add(const T* cols, std::size_t n, std::size_t c, std::size_t h,
                std::size_t w, T* dx) {
  const std::size_t hw = h * w;
  const std::size_t stride = n * hw;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const T* row = cols + ((ch * 3 + ky) * 3 + kx) * stride;
        const std::size_t x_lo = kx == 0 ? 1 : 0;
        const std::size_t x_hi = kx == 2 ? w - 1 : w;
        for (std::size_t img = 0; img < n; ++img) {
          T* plane = dx + (img * c + ch) * hw;
          const T* src = row + img * hw;
          for (std::size_t y = 0; y < h; ++y) {
            const long iy = static_cast<long>(y + ky) - 1;
            if (iy < 0 || iy >= static_cast<long>(h)) continue;
            T* out = plane + static_cast<std::size_t>(iy) * w;
            const T* in = src + y * w;
            for (std::size_t xx = x_lo; xx < x_hi; ++xx) out[xx + kx - 1] += in[xx];
          }
        }
      }
    }
  }
}

}  // namespace

std::string describe(const LayerSpec& layer) {
  struct Visitor {
    std::string operator()(const Conv3x3& l) const {
      return "conv3x3(" + std::to_string(l.in_channels) + "->" +
             std::to_string(l.out_channels) + ")";
    }
    std::string operator()(const MaxPool2x2&) const { return "maxpool2x2"; }
    std::string operator()(const Relu&) const { return "relu"; }
    std::string operator()(const GlobalAvgPool&) const {
      return "global_avg_pool";
    }
    std::string operator()(const Dense& l) const {
      return "dense(" + std::to_string(l.in_features) + "->" +
             std::to_string(l.out_features) + ")";
    }
  };
  return std::visit(Visitor{}, layer);
}

std::vector<Shape> parameter_shapes(const LayerSpec& layer) {
  if (const auto* conv = std::get_if<Conv3x3>(&layer)) {
    return {{conv->out_channels, conv->in_channels, 3, 3},
            {conv->out_channels}};
  }
  if (const auto* fc = std::get_if<Dense>(&layer)) {
    return {{fc->out_features, fc->in_features}, {fc->out_features}};
  }
  return {};
}

std::size_t fan_in(const LayerSpec& layer) {
  if (const auto* conv = std::get_if<Conv3x3>(&layer)) {
    return conv->in_channels * 9;
  }
  if (const auto* fc = std::get_if<Dense>(&layer)) return fc->in_features;
  return 0;
}

template <typename T>
NodeId layer_forward(Tape<T>& tape, const LayerSpec& layer, NodeId input,
                     std::span<const NodeId> params, std::string_view name) {
  const std::string label =
      (name.empty() ? std::string() : std::string(name) + " ") + "(" +
      describe(layer) + ")";
  const Shape& in = tape.value(input).shape();
  auto fail = [&](const std::string& what) -> void {
    throw ShapeError(label + ": " + what + "; input shape " + to_string(in));
  };
  auto check_dim = [&](std::size_t axis, std::size_t expected,
                       const char* meaning) {
    if (in[axis] != expected) {
      fail("input dim " + std::to_string(axis) + " (" + meaning + ") is " +
           std::to_string(in[axis]) + ", expected " + std::to_string(expected));
    }
  };

  const std::vector<Shape> expected_params = parameter_shapes(layer);
  if (params.size() != expected_params.size()) {
    fail("expected " + std::to_string(expected_params.size()) +
         " parameter tensors, got " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (tape.value(params[k]).shape() != expected_params[k]) {
      fail("parameter " + std::to_string(k) + " has shape " +
           to_string(tape.value(params[k]).shape()) + ", expected " +
           to_string(expected_params[k]));
    }
  }

  if (const auto* conv = std::get_if<Conv3x3>(&layer)) {
    if (in.size() != 4) fail("expected rank 4 (N, C, H, W)");
    check_dim(1, conv->in_channels, "channels");
    return ops::conv3x3(tape, input, params[0], params[1]);
  }
  if (std::holds_alternative<MaxPool2x2>(layer)) {
    if (in.size() != 4) fail("expected rank 4 (N, C, H, W)");
    if (in[2] < 2) fail("input dim 2 (height) is below 2");
    if (in[3] < 2) fail("input dim 3 (width) is below 2");
    return ops::max_pool2x2(tape, input);
  }
  if (std::holds_alternative<Relu>(layer)) return ops::relu(tape, input);
  if (std::holds_alternative<GlobalAvgPool>(layer)) {
    if (in.size() != 4) fail("expected rank 4 (N, C, H, W)");
    return ops::global_avg_pool(tape, input);
  }
  const auto& fc = std::get<Dense>(layer);
  if (in.size() != 2) fail("expected rank 2 (N, features)");
  check_dim(1, fc.in_features, "features");
  return ops::dense(tape, input, params[0], params[1]);
}

namespace ops {

template <typename T>
NodeId conv3x3(Tape<T>& tape, NodeId x, NodeId weight, NodeId bias) {
  const Tensor<T>& xv = tape.value(x);
  const Tensor<T>& wv = tape.value(weight);
  const Tensor<T>& bv = tape.value(bias);
  require_rank("conv3x3 input", xv.shape(), 4);
  require_rank("conv3x3 weight", wv.shape(), 4);
  const std::size_t n = xv.dim(0), c = xv.dim(1), h = xv.dim(2), w = xv.dim(3);
  const std::size_t co = wv.dim(0);
  if (wv.dim(1) != c || wv.dim(2) != 3 || wv.dim(3) != 3) {
    shape_error("conv3x3", "weight " + to_string(wv.shape()) +
                               " does not fit input " + to_string(xv.shape()));
  }
  if (bv.shape() != Shape{co}) {
    shape_error("conv3x3", "bias " + to_string(bv.shape()) +
                               " does not match " + std::to_string(co) +
                               " output channels");
  }
  const std::size_t hw = h * w;
  const std::size_t k = c * 9;
  auto cols = std::make_shared<AlignedVector<T>>(k * n * hw);
  im2col(xv.raw(), n, c, h, w, cols->data());

  RowMat<T> out_mat(co, n * hw);
  out_mat.noalias() = ConstMatMap<T>(wv.raw(), co, k) *
                      ConstMatMap<T>(cols->data(), k, n * hw);
  Tensor<T> out({n, co, h, w});
  for (std::size_t img = 0; img < n; ++img) {
    for (std::size_t o = 0; o < co; ++o) {
      const T* src = out_mat.data() + o * n * hw + img * hw;
      T* dst = out.raw() + (img * co + o) * hw;
      const T b = bv[o];
      for (std::size_t p = 0; p < hw; ++p) dst[p] = src[p] + b;
    }
  }

  return tape.record(
      std::move(out), {x, weight, bias},
      [&tape, weight, n, c, h, w, co, cols](const Tensor<T>& g,
                                            std::span<Tensor<T>* const> grad) {
        const std::size_t hw = h * w;
        const std::size_t k = c * 9;
        RowMat<T> g_mat(co, n * hw);
        for (std::size_t img = 0; img < n; ++img) {
          for (std::size_t o = 0; o < co; ++o) {
            std::memcpy(g_mat.data() + o * n * hw + img * hw,
                        g.raw() + (img * co + o) * hw, hw * sizeof(T));
          }
        }
        const ConstMatMap<T> col_mat(cols->data(), k, n * hw);
        if (grad[1]) {
          MatMap<T>(grad[1]->raw(), co, k).noalias() +=
              g_mat * col_mat.transpose();
        }
        if (grad[2]) {
          Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>(grad[2]->raw(), co) +=
              g_mat.rowwise().sum();
        }
        if (grad[0]) {
          RowMat<T> d_cols(k, n * hw);
          d_cols.noalias() =
              ConstMatMap<T>(tape.value(weight).raw(), co, k).transpose() *
              g_mat;
          col2im_add(d_cols.data(), n, c, h, w, grad[0]->raw());
        }
      });
}

template <typename T>
NodeId max_pool2x2(Tape<T>& tape, NodeId x) {
  const Tensor<T>& xv = tape.value(x);
  require_rank("max_pool2x2", xv.shape(), 4);
  const std::size_t n = xv.dim(0), c = xv.dim(1), h = xv.dim(2), w = xv.dim(3);
  if (h < 2 || w < 2) {
    shape_error("max_pool2x2", "spatial extent below 2 in " +
                                   to_string(xv.shape()));
  }
  const std::size_t oh = h / 2, ow = w / 2;
  Tensor<T> out({n, c, oh, ow});
  auto argmax = std::make_shared<std::vector<std::uint32_t>>(out.size());
  std::size_t o = 0;
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const T* in = xv.raw() + plane * h * w;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t xx = 0; xx < ow; ++xx, ++o) {
        // First maximum in row-major window order wins ties.
        std::size_t best = (2 * y) * w + 2 * xx;
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (2 * y + dy) * w + 2 * xx + dx;
            if (in[idx] > in[best]) best = idx;
          }
        }
        out[o] = in[best];
        (*argmax)[o] = static_cast<std::uint32_t>(plane * h * w + best);
      }
    }
  }
  return tape.record(std::move(out), {x},
                     [argmax](const Tensor<T>& g,
                              std::span<Tensor<T>* const> grad) {
                       if (!grad[0]) return;
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         (*grad[0])[(*argmax)[i]] += g[i];
                       }
                     });
}

template <typename T>
NodeId relu(Tape<T>& tape, NodeId x) {
  Tensor<T> out = tape.value(x);
  for (T& v : out.data()) v = std::max(v, T{0});
  return tape.record(std::move(out), {x},
                     [&tape, x](const Tensor<T>& g,
                                std::span<Tensor<T>* const> grad) {
                       if (!grad[0]) return;
                       const Tensor<T>& xv = tape.value(x);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         if (xv[i] > T{0}) (*grad[0])[i] += g[i];
                       }
                     });
}

template <typename T>
NodeId global_avg_pool(Tape<T>& tape, NodeId x) {
  const Tensor<T>& xv = tape.value(x);
  require_rank("global_avg_pool", xv.shape(), 4);
  const std::size_t n = xv.dim(0), c = xv.dim(1);
  const std::size_t hw = xv.dim(2) * xv.dim(3);
  Tensor<T> out({n, c});
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const T* in = xv.raw() + plane * hw;
    T sum{0};
    for (std::size_t p = 0; p < hw; ++p) sum += in[p];
    out[plane] = sum / static_cast<T>(hw);
  }
  return tape.record(std::move(out), {x},
                     [hw](const Tensor<T>& g,
                          std::span<Tensor<T>* const> grad) {
                       if (!grad[0]) return;
                       const T scale = T{1} / static_cast<T>(hw);
                       for (std::size_t plane = 0; plane < g.size(); ++plane) {
                         T* dst = grad[0]->raw() + plane * hw;
                         const T v = g[plane] * scale;
                         for (std::size_t p = 0; p < hw; ++p) dst[p] += v;
                       }
                     });
}

template <typename T>
NodeId dense(Tape<T>& tape, NodeId x, NodeId weight, NodeId bias) {
  const Tensor<T>& xv = tape.value(x);
  const Tensor<T>& wv = tape.value(weight);
  const Tensor<T>& bv = tape.value(bias);
  require_rank("dense input", xv.shape(), 2);
  require_rank("dense weight", wv.shape(), 2);
  const std::size_t n = xv.dim(0), in = xv.dim(1), out_f = wv.dim(0);
  if (wv.dim(1) != in) {
    shape_error("dense", "weight " + to_string(wv.shape()) +
                             " does not fit input " + to_string(xv.shape()));
  }
  if (bv.shape() != Shape{out_f}) {
    shape_error("dense", "bias " + to_string(bv.shape()) + " does not match " +
                             std::to_string(out_f) + " outputs");
  }
  Tensor<T> out({n, out_f});
  MatMap<T> y(out.raw(), n, out_f);
  y.noalias() = ConstMatMap<T>(xv.raw(), n, in) *
                ConstMatMap<T>(wv.raw(), out_f, in).transpose();
  y.rowwise() +=
      Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(bv.raw(), out_f);
  return tape.record(
      std::move(out), {x, weight, bias},
      [&tape, x, weight, n, in, out_f](const Tensor<T>& g,
                                       std::span<Tensor<T>* const> grad) {
        const ConstMatMap<T> g_mat(g.raw(), n, out_f);
        if (grad[0]) {
          MatMap<T>(grad[0]->raw(), n, in).noalias() +=
              g_mat * ConstMatMap<T>(tape.value(weight).raw(), out_f, in);
        }
        if (grad[1]) {
          MatMap<T>(grad[1]->raw(), out_f, in).noalias() +=
              g_mat.transpose() * ConstMatMap<T>(tape.value(x).raw(), n, in);
        }
        if (grad[2]) {
          Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(grad[2]->raw(),
                                                          out_f) +=
              g_mat.colwise().sum();
        }
      });
}

template <typename T>
NodeId add(Tape<T>& tape, NodeId a, NodeId b) {
  const Tensor<T>& av = tape.value(a);
  const Tensor<T>& bv = tape.value(b);
  if (av.shape() != bv.shape()) {
    shape_error("add", to_string(av.shape()) + " vs " + to_string(bv.shape()));
  }
  Tensor<T> out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return tape.record(std::move(out), {a, b},
                     [](const Tensor<T>& g, std::span<Tensor<T>* const> grad) {
                       for (Tensor<T>* dst : grad) {
                         if (!dst) continue;
                         for (std::size_t i = 0; i < g.size(); ++i) {
                           (*dst)[i] += g[i];
                         }
                       }
                     });
}

template <typename T>
NodeId mse_loss(Tape<T>& tape, NodeId pred, NodeId target) {
  const Tensor<T>& p = tape.value(pred);
  const Tensor<T>& y = tape.value(target);
  if (p.shape() != y.shape()) {
    shape_error("mse_loss", "prediction " + to_string(p.shape()) +
                                " vs target " + to_string(y.shape()));
  }
  T sum{0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T d = p[i] - y[i];
    sum += d * d;
  }
  const T count = static_cast<T>(p.size());
  return tape.record(
      Tensor<T>::scalar(sum / count), {pred, target},
      [&tape, pred, target, count](const Tensor<T>& g,
                                   std::span<Tensor<T>* const> grad) {
        const Tensor<T>& p = tape.value(pred);
        const Tensor<T>& y = tape.value(target);
        const T scale = T{2} * g[0] / count;
        for (std::size_t i = 0; i < p.size(); ++i) {
          const T d = scale * (p[i] - y[i]);
          if (grad[0]) (*grad[0])[i] += d;
          if (grad[1]) (*grad[1])[i] -= d;
        }
      });
}

template <typename T>
NodeId bce_loss(Tape<T>& tape, NodeId logit, NodeId target) {
  const Tensor<T>& z = tape.value(logit);
  const Tensor<T>& y = tape.value(target);
  if (z.shape() != y.shape()) {
    shape_error("bce_loss", "logit " + to_string(z.shape()) + " vs target " +
                                to_string(y.shape()));
  }
  T sum{0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(y[i] >= T{0} && y[i] <= T{1})) {
      throw Error("bce_loss: target " + std::to_string(y[i]) +
                  " outside [0, 1]");
    }
    // -y log s(z) - (1 - y) log(1 - s(z)), in overflow-free form.
    sum += std::max(z[i], T{0}) - z[i] * y[i] +
           std::log1p(std::exp(-std::abs(z[i])));
  }
  const T count = static_cast<T>(z.size());
  return tape.record(
      Tensor<T>::scalar(sum / count), {logit, target},
      [&tape, logit, target, count](const Tensor<T>& g,
                                    std::span<Tensor<T>* const> grad) {
        const Tensor<T>& z = tape.value(logit);
        const Tensor<T>& y = tape.value(target);
        const T scale = g[0] / count;
        for (std::size_t i = 0; i < z.size(); ++i) {
          if (grad[0]) (*grad[0])[i] += scale * (sigmoid(z[i]) - y[i]);
          if (grad[1]) (*grad[1])[i] -= scale * z[i];
        }
      });
}

#define ADACL_INSTANTIATE_OPS(T)                                           \
  template NodeId conv3x3(Tape<T>&, NodeId, NodeId, NodeId);               \
  template NodeId max_pool2x2(Tape<T>&, NodeId);                           \
  template NodeId relu(Tape<T>&, NodeId);                                  \
  template NodeId global_avg_pool(Tape<T>&, NodeId);                       \
  template NodeId dense(Tape<T>&, NodeId, NodeId, NodeId);                 \
  template NodeId add(Tape<T>&, NodeId, NodeId);                           \
  template NodeId mse_loss(Tape<T>&, NodeId, NodeId);                      \
  template NodeId bce_loss(Tape<T>&, NodeId, NodeId);

ADACL_INSTANTIATE_OPS(float)
ADACL_INSTANTIATE_OPS(double)
#undef ADACL_INSTANTIATE_OPS

}  // namespace ops

template NodeId layer_forward(Tape<float>&, const LayerSpec&, NodeId,
                              std::span<const NodeId>, std::string_view);
template NodeId layer_forward(Tape<double>&, const LayerSpec&, NodeId,
                              std::span<const NodeId>, std::string_view);

}  // namespace adacl
