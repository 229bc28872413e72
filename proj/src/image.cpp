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

#include "adacl/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adacl/error.hpp"

namespace adacl {
namespace {

std::string extension_of(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

Image read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("image: cannot open " + path);
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") {
    throw DataError("image: " + path + " is not a binary PGM/PPM");
  }
  std::size_t width = 0, height = 0, maxval = 0;
  try {
    width = std::stoul(pnm_token(in));
    height = std::stoul(pnm_token(in));
    maxval = std::stoul(pnm_token(in));
  } catch (const std::exception&) {
    throw DataError("image: malformed header in " + path);
  }
  if (width == 0 || height == 0 || maxval == 0 || maxval > 255) {
    throw DataError("image: unsupported geometry or maxval in " + path);
  }
  const std::size_t channels = magic == "P6" ? 3 : 1;
  std::vector<unsigned char> raw(width * height * channels);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw DataError("image: truncated pixel data in " + path);
  }
  Image image(channels, height, width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        image.at(c, y, x) =
            static_cast<float>(raw[(y * width + x) * channels + c]) /
            static_cast<float>(maxval);
      }
    }
  }
  return image;
}

Image read_png(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw DataError("image: cannot read PNG " + path + ": " + png.message);
  }
  const bool colour = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = colour ? 3 : 1;
  std::vector<unsigned char> raw(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raw.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw DataError("image: cannot decode PNG " + path + ": " + message);
  }
  Image image(channels, png.height, png.width);
  for (std::size_t y = 0; y < png.height; ++y) {
    for (std::size_t x = 0; x < png.width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        image.at(c, y, x) =
            static_cast<float>(raw[(y * png.width + x) * channels + c]) / 255.0f;
      }
    }
  }
  return image;
}

}  // namespace

Image::Image(std::size_t channels, std::size_t height, std::size_t width,
             float fill)
    : Image(channels, height, width,
            std::vector<float>(channels * height * width, fill)) {}

Image::Image(std::size_t channels, std::size_t height, std::size_t width,
             std::vector<float> pixels)
    : channels_(channels),
      height_(height),
      width_(width),
      pixels_(std::move(pixels)) {
  if (channels == 0 || height == 0 || width == 0) {
    throw ShapeError("image: zero extent");
  }
  if (pixels_.size() != channels * height * width) {
    throw ShapeError("image: " + std::to_string(pixels_.size()) +
                     " pixels for a " + std::to_string(channels) + "x" +
                     std::to_string(height) + "x" + std::to_string(width) +
                     " image");
  }
}

Image pad_to(const Image& image, std::size_t side) {
  if (image.height() > side || image.width() > side) {
    throw ShapeError("pad_to: image " + std::to_string(image.height()) + "x" +
                     std::to_string(image.width()) + " exceeds side " +
                     std::to_string(side));
  }
  const std::size_t top = (side - image.height()) / 2;
  const std::size_t left = (side - image.width()) / 2;
  Image out(image.channels(), side, side);
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t y = 0; y < image.height(); ++y) {
      for (std::size_t x = 0; x < image.width(); ++x) {
        out.at(c, y + top, x + left) = image.at(c, y, x);
      }
    }
  }
  return out;
}

Image resize_bilinear(const Image& image, std::size_t height,
                      std::size_t width) {
  Image out(image.channels(), height, width);
  const double sy = static_cast<double>(image.height()) / height;
  const double sx = static_cast<double>(image.width()) / width;
  const double max_y = static_cast<double>(image.height() - 1);
  const double max_x = static_cast<double>(image.width() - 1);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (std::size_t c = 0; c < image.channels(); ++c) {
        const double top = (1 - wx) * image.at(c, y0, x0) + wx * image.at(c, y0, x1);
        const double bottom =
            (1 - wx) * image.at(c, y1, x0) + wx * image.at(c, y1, x1);
        out.at(c, y, x) = static_cast<float>((1 - wy) * top + wy * bottom);
      }
    }
  }
  return out;
}

Image crop(const Image& image, std::size_t top, std::size_t left,
           std::size_t height, std::size_t width) {
  if (top + height > image.height() || left + width > image.width()) {
    throw ShapeError("crop: rectangle leaves the image");
  }
  Image out(image.channels(), height, width);
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        out.at(c, y, x) = image.at(c, top + y, left + x);
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> to_batch(std::span<const Image* const> images) {
  if (images.empty()) throw ShapeError("to_batch: no images");
  const Image& first = *images.front();
  Tensor<T> batch({images.size(), first.channels(), first.height(),
                   first.width()});
  T* dst = batch.raw();
  for (const Image* image : images) {
    if (!image->same_shape(first)) {
      throw ShapeError("to_batch: images differ in shape");
    }
    dst = std::copy(image->pixels().begin(), image->pixels().end(), dst);
  }
  return batch;
}

template <typename T>
Tensor<T> to_batch(std::span<const Image> images) {
  std::vector<const Image*> pointers;
  pointers.reserve(images.size());
  for (const Image& image : images) pointers.push_back(&image);
  return to_batch<T>(std::span<const Image* const>(pointers));
}

template Tensor<float> to_batch(std::span<const Image>);
template Tensor<double> to_batch(std::span<const Image>);
template Tensor<float> to_batch(std::span<const Image* const>);
template Tensor<double> to_batch(std::span<const Image* const>);

void write_pnm(const std::string& path, const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw ShapeError("write_pnm: needs 1 or 3 channels");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("image: cannot open " + path + " for writing");
  out << (image.channels() == 1 ? "P5" : "P6") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<unsigned char> raw;
  raw.reserve(image.size());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      for (std::size_t c = 0; c < image.channels(); ++c) {
        const float v = std::clamp(image.at(c, y, x), 0.0f, 1.0f);
        raw.push_back(static_cast<unsigned char>(std::lround(v * 255.0f)));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw DataError("image: write failed for " + path);
}

Image read_image(const std::string& path) {
  const std::string ext = extension_of(path);
  if (ext == "png") return read_png(path);
  if (ext == "pgm" || ext == "ppm" || ext == "pnm") return read_pnm(path);
  throw DataError("image: unsupported file type '" + ext + "' for " + path +
                  " (expected .pgm, .ppm or .png)");
}

Image to_grayscale(const Image& image) {
  if (image.channels() == 1) return image;
  if (image.channels() != 3) {
    throw ShapeError("to_grayscale: expected 1 or 3 channels");
  }
  // ITU-R BT.601 luma weights.
  Image out(1, image.height(), image.width());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      out.at(0, y, x) = 0.299f * image.at(0, y, x) +
                        0.587f * image.at(1, y, x) +
                        0.114f * image.at(2, y, x);
    }
  }
  return out;
}

}  // namespace adacl
