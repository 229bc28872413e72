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

#ifndef ADACL_TESTS_FIXTURES_HPP_
#define ADACL_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "adacl/data.hpp"
#include "adacl/image.hpp"
#include "adacl/model.hpp"
#include "adacl/rng.hpp"

namespace adacl::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("adacl_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

inline void put_u32_be(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint8_t to_byte(float v) {
  const float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

/// Writes grayscale images (all the same size) as an IDX3 unsigned-byte file.
inline void write_idx_images(const std::string& path,
                             const std::vector<Image>& images) {
  std::ofstream out(path, std::ios::binary);
  put_u32_be(out, 0x00000803);
  put_u32_be(out, static_cast<std::uint32_t>(images.size()));
  put_u32_be(out, static_cast<std::uint32_t>(images.at(0).height()));
  put_u32_be(out, static_cast<std::uint32_t>(images.at(0).width()));
  for (const Image& img : images) {
    for (float v : img.pixels()) out.put(static_cast<char>(to_byte(v)));
  }
}

inline void write_idx_labels(const std::string& path,
                             const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  put_u32_be(out, 0x00000801);
  put_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  for (int l : labels) out.put(static_cast<char>(l));
}

/// CIFAR-10 binary records for 3x32x32 images.
inline void write_cifar_batch(const std::string& path,
                              const std::vector<Image>& images,
                              const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.put(static_cast<char>(labels[i]));
    for (float v : images[i].pixels()) out.put(static_cast<char>(to_byte(v)));
  }
}

/// Class c is a bright 8x8 square whose position depends on c, over faint
/// noise. Pixels are quantized to 1/255 so IDX round trips are exact.
inline Image class_image(int cls, RngStream& rng, std::size_t side = 28) {
  Image img(1, side, side);
  for (float& v : img.pixels())
    v = static_cast<float>(rng.integer(0, 40)) / 255.0f;
  const std::size_t top = 2 + static_cast<std::size_t>(cls % 3) * 8;
  const std::size_t left = 2 + static_cast<std::size_t>(cls / 3 % 3) * 8;
  for (std::size_t y = top; y < top + 8 && y < side; ++y) {
    for (std::size_t x = left; x < left + 8 && x < side; ++x)
      img.at(0, y, x) = static_cast<float>(rng.integer(200, 255)) / 255.0f;
  }
  return img;
}

inline Dataset class_dataset(const std::vector<int>& classes,
                             std::size_t per_class, std::uint64_t seed,
                             const std::string& name) {
  Dataset d{name, {}};
  RngStream rng(seed);
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c : classes) {
      d.samples.push_back({class_image(c, rng),
                           name + ":" + std::to_string(d.samples.size()), c});
    }
  }
  return d;
}

/// Small one-channel benchmark with the given classes.
inline Benchmark synthetic_benchmark(const std::vector<int>& classes,
                                     std::size_t train_per_class,
                                     std::size_t test_per_class,
                                     std::uint64_t seed = 1) {
  return {class_dataset(classes, train_per_class, seed, "train"),
          class_dataset(classes, test_per_class, seed + 1, "test")};
}

/// Writes a benchmark in the MNIST directory layout.
inline void write_idx_benchmark(const std::string& dir,
                                const Benchmark& bench) {
  auto write = [&](const Dataset& d, const std::string& prefix) {
    std::vector<Image> images;
    std::vector<int> labels;
    for (const ImageSample& s : d.samples) {
      images.push_back(s.image);
      labels.push_back(s.class_tag);
    }
    write_idx_images(dir + "/" + prefix + "-images-idx3-ubyte", images);
    write_idx_labels(dir + "/" + prefix + "-labels-idx1-ubyte", labels);
  };
  write(bench.train, "train");
  write(bench.test, "t10k");
}

/// Regressor whose raw score grows with the brightness of channel 0: each
/// stage copies channel 0 through its centre tap.
inline ModelParams<float> brightness_model(std::size_t channels) {
  ModelParams<float> params = zero_model<float>(channels);
  const std::vector<std::string> names = parameter_names(channels);
  for (std::size_t k = 0; k < names.size(); ++k) {
    Tensor<float>& t = params.tensors()[k];
    if (names[k] == "conv1.weight" || names[k] == "conv2.weight" ||
        names[k] == "conv3.weight") {
      t[4] = 1.0f;  // [0][0][1][1]
    } else if (names[k] == "fc1.weight" || names[k] == "fc2.weight") {
      t[0] = 1.0f;
    }
  }
  return params;
}

struct VideoFixture {
  std::string train_frames;
  std::string test_frames;
  std::string test_masks;
};

/// Dim 60x90 frames (6 patches of 30x30 each). Test frames listed in
/// `anomalous` get a bright 20x20 block and a matching mask.
inline VideoFixture write_video_fixture(const std::filesystem::path& root,
                                        std::size_t train_frames,
                                        std::size_t test_frames,
                                        const std::vector<std::size_t>& anomalous,
                                        std::uint64_t seed = 3) {
  namespace fs = std::filesystem;
  VideoFixture f{(root / "train").string(), (root / "test").string(),
                 (root / "test_gt").string()};
  fs::create_directories(root / "train" / "clip");
  fs::create_directories(root / "test" / "clip");
  fs::create_directories(root / "test_gt" / "clip");
  RngStream rng(seed);
  auto dim_frame = [&rng] {
    Image img(1, 60, 90);
    for (float& v : img.pixels())
      v = static_cast<float>(rng.integer(0, 40)) / 255.0f;
    return img;
  };
  auto name = [](std::size_t i) {
    return "clip/" + std::string(i < 10 ? "0" : "") + std::to_string(i) +
           ".pgm";
  };
  for (std::size_t i = 0; i < train_frames; ++i)
    write_pnm((root / "train" / name(i)).string(), dim_frame());
  for (std::size_t i = 0; i < test_frames; ++i) {
    Image img = dim_frame();
    Image mask(1, 60, 90, 0.0f);
    const bool bad =
        std::find(anomalous.begin(), anomalous.end(), i) != anomalous.end();
    if (bad) {
      for (std::size_t y = 35; y < 55; ++y) {
        for (std::size_t x = 35; x < 55; ++x) {
          img.at(0, y, x) = 1.0f;
          mask.at(0, y, x) = 1.0f;
        }
      }
    }
    write_pnm((root / "test" / name(i)).string(), img);
    write_pnm((root / "test_gt" / name(i)).string(), mask);
  }
  return f;
}

}  // namespace adacl::testing

#endif  // ADACL_TESTS_FIXTURES_HPP_
