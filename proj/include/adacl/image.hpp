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

#ifndef ADACL_IMAGE_HPP_
#define ADACL_IMAGE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adacl/tensor.hpp"

namespace adacl {

/// Planar (channel-major) image with float pixels, nominally in [0, 1].
class Image {
 public:
  Image() = default;
  Image(std::size_t channels, std::size_t height, std::size_t width,
        float fill = 0.0f);
  Image(std::size_t channels, std::size_t height, std::size_t width,
        std::vector<float> pixels);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  bool square() const noexcept { return height_ == width_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return pixels_[(c * height_ + y) * width_ + x];
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return pixels_[(c * height_ + y) * width_ + x];
  }

  std::span<float> pixels() noexcept { return pixels_; }
  std::span<const float> pixels() const noexcept { return pixels_; }

  bool same_shape(const Image& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> pixels_;
};

/// Centers the image on a zero canvas of side x side.
Image pad_to(const Image& image, std::size_t side);

/// Bilinear resampling with pixel-center alignment (edge pixels clamped).
Image resize_bilinear(const Image& image, std::size_t height,
                      std::size_t width);

/// Axis-aligned crop; the rectangle must lie inside the image.
Image crop(const Image& image, std::size_t top, std::size_t left,
           std::size_t height, std::size_t width);

/// Stacks equally shaped images into an [N, C, H, W] tensor.
template <typename T>
Tensor<T> to_batch(std::span<const Image> images);

template <typename T>
Tensor<T> to_batch(std::span<const Image* const> images);

/// Binary PGM (1 channel) or PPM (3 channels), 8-bit, values clamped to
/// [0, 1] before quantization.
void write_pnm(const std::string& path, const Image& image);

/// Reads binary PGM/PPM (P5/P6, maxval < 256) or 8-bit grayscale/RGB PNG.
/// Colour inputs are kept as 3 channels; use to_grayscale() if needed.
Image read_image(const std::string& path);

Image to_grayscale(const Image& image);

}  // namespace adacl

#endif  // ADACL_IMAGE_HPP_
