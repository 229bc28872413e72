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

#include "adacl/data.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "adacl/error.hpp"
#include "adacl/model.hpp"

namespace adacl {
namespace {

constexpr std::uint8_t kIdxUnsignedByte = 0x08;
constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
constexpr std::uint64_t kMaxIdxPayload = std::uint64_t{1} << 34;

std::uint32_t read_be32(std::istream& in, const std::string& origin,
                        const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError("idx: " + origin + ": truncated " + what);
  }
  return static_cast<std::uint32_t>(b[0]) << 24 |
         static_cast<std::uint32_t>(b[1]) << 16 |
         static_cast<std::uint32_t>(b[2]) << 8 | static_cast<std::uint32_t>(b[3]);
}

std::string hex32(std::uint32_t v) {
  char buf[11];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

std::ifstream open_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace

IdxArray read_idx(std::istream& in, const std::string& origin) {
  const std::uint32_t magic = read_be32(in, origin, "magic");
  const std::uint8_t type = (magic >> 8) & 0xff;
  const std::uint32_t ndims = magic & 0xff;
  if ((magic >> 16) != 0 || type != kIdxUnsignedByte || ndims == 0 ||
      ndims > 8) {
    throw DataError("idx: " + origin + ": bad magic " + hex32(magic));
  }
  IdxArray array;
  std::uint64_t payload = 1;
  for (std::uint32_t d = 0; d < ndims; ++d) {
    const std::uint32_t extent = read_be32(in, origin, "dimension");
    array.dims.push_back(extent);
    if (extent != 0 && payload > kMaxIdxPayload / extent) {
      throw DataError("idx: " + origin + ": dimension overflow");
    }
    payload *= extent;
  }
  // Refuse to allocate more than the stream can hold.
  const auto here = in.tellg();
  if (here != std::istream::pos_type(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (end != std::istream::pos_type(-1) &&
        static_cast<std::uint64_t>(end - here) < payload) {
      throw DataError("idx: " + origin + ": truncated payload (" +
                      std::to_string(static_cast<std::uint64_t>(end - here)) +
                      " of " + std::to_string(payload) + " bytes)");
    }
  }
  array.bytes.resize(payload);
  if (!in.read(reinterpret_cast<char*>(array.bytes.data()),
               static_cast<std::streamsize>(payload))) {
    throw DataError("idx: " + origin + ": truncated payload");
  }
  return array;
}

IdxArray read_idx_file(const std::string& path) {
  std::ifstream in = open_binary(path);
  return read_idx(in, path);
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 const std::string& name) {
  const IdxArray images = read_idx_file(images_path);
  const IdxArray labels = read_idx_file(labels_path);
  if (images.dims.size() != 3) {
    throw DataError("idx: " + images_path + ": expected magic " +
                    hex32(kIdxImagesMagic) + " (3-d image array)");
  }
  if (labels.dims.size() != 1) {
    throw DataError("idx: " + labels_path + ": expected magic " +
                    hex32(kIdxLabelsMagic) + " (1-d label array)");
  }
  const std::size_t count = images.dims[0];
  if (labels.dims[0] != count) {
    throw DataError("idx: " + std::to_string(count) + " images but " +
                    std::to_string(labels.dims[0]) + " labels");
  }
  const std::size_t h = images.dims[1], w = images.dims[2];
  if (h == 0 || w == 0) throw DataError("idx: zero image extent");
  Dataset ds;
  ds.name = name;
  ds.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<float> pixels(h * w);
    const std::uint8_t* src = images.bytes.data() + i * h * w;
    for (std::size_t p = 0; p < h * w; ++p) pixels[p] = src[p] / 255.0f;
    ds.samples.push_back({Image(1, h, w, std::move(pixels)),
                          name + ":" + std::to_string(i), labels.bytes[i]});
  }
  return ds;
}

Benchmark load_idx_benchmark(const std::string& dir, const std::string& name) {
  const std::filesystem::path root(dir);
  auto file = [&](const char* f) { return (root / f).string(); };
  Benchmark b;
  b.train = load_idx(file("train-images-idx3-ubyte"),
                     file("train-labels-idx1-ubyte"), name + "-train");
  b.test = load_idx(file("t10k-images-idx3-ubyte"),
                    file("t10k-labels-idx1-ubyte"), name + "-test");
  return b;
}

Dataset load_cifar(std::span<const std::string> paths, const std::string& name) {
  Dataset ds;
  ds.name = name;
  for (const std::string& path : paths) {
    std::ifstream in = open_binary(path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
      throw DataError("cifar: " + path + ": size " +
                      std::to_string(bytes.size()) +
                      " is not a multiple of the 3073-byte record length");
    }
    const std::size_t records = bytes.size() / kCifarRecordBytes;
    for (std::size_t r = 0; r < records; ++r) {
      const unsigned char* rec = bytes.data() + r * kCifarRecordBytes;
      if (rec[0] > 9) {
        throw DataError("cifar: " + path + ": record " + std::to_string(r) +
                        " has label " + std::to_string(rec[0]) + " > 9");
      }
      std::vector<float> pixels(3072);
      for (std::size_t p = 0; p < 3072; ++p) pixels[p] = rec[1 + p] / 255.0f;
      ds.samples.push_back({Image(3, 32, 32, std::move(pixels)),
                            name + ":" + std::to_string(ds.samples.size()),
                            rec[0]});
    }
  }
  return ds;
}

Benchmark load_cifar_benchmark(const std::string& dir) {
  const std::filesystem::path root(dir);
  std::vector<std::string> train;
  for (int i = 1; i <= 5; ++i) {
    train.push_back((root / ("data_batch_" + std::to_string(i) + ".bin")).string());
  }
  const std::vector<std::string> test = {(root / "test_batch.bin").string()};
  return {load_cifar(train, "cifar10-train"), load_cifar(test, "cifar10-test")};
}

std::vector<std::size_t> seeded_subset(std::size_t n, std::size_t k,
                                       RngStream rng) {
  k = std::min(k, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.index(n - i)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Image to_network_input(const Image& image) {
  if (image.height() == kInputSide && image.width() == kInputSide) return image;
  return pad_to(image, kInputSide);
}

std::size_t ProtocolSplit::channels() const {
  if (!train.empty()) return train.front().channels();
  if (!test.empty()) return test.front().image.channels();
  return 0;
}

ValidationSet make_validation_set(std::span<const Image> normals,
                                  std::uint64_t seed,
                                  const SplitOptions& options) {
  if (normals.size() < options.validation_size) {
    throw DataError("split: " + std::to_string(normals.size()) +
                    " normal samples, need at least " +
                    std::to_string(options.validation_size) +
                    " for the validation set");
  }
  const RngStream root(seed);
  ValidationSet val;
  val.normal_indices = seeded_subset(normals.size(), options.validation_size,
                                     root.derive("validation"));
  for (std::size_t idx : val.normal_indices) {
    val.images.push_back(normals[idx]);
    val.labels.push_back(0);
  }
  for (std::size_t k = 0; k < val.normal_indices.size(); ++k) {
    RngStream rng = root.derive("validation_anomaly", k);
    val.images.push_back(
        create_anomaly(normals[val.normal_indices[k]], options.augment, rng)
            .image);
    val.labels.push_back(1);
  }
  return val;
}

ProtocolSplit make_protocol_split(const Benchmark& benchmark, int normal_class,
                                  std::uint64_t seed,
                                  const SplitOptions& options) {
  options.augment.validate();
  std::vector<const Image*> normals;
  for (const auto& s : benchmark.train.samples) {
    if (s.class_tag == normal_class) normals.push_back(&s.image);
  }
  if (normals.empty()) {
    throw ConfigError("split: class " + std::to_string(normal_class) +
                      " is absent from " + benchmark.train.name);
  }
  const RngStream root(seed);
  ProtocolSplit split;
  if (options.train_limit != 0 && options.train_limit < normals.size()) {
    for (std::size_t i : seeded_subset(normals.size(), options.train_limit,
                                       root.derive("train_subset"))) {
      split.train.push_back(to_network_input(*normals[i]));
    }
  } else {
    for (const Image* img : normals) split.train.push_back(to_network_input(*img));
  }
  split.validation = make_validation_set(split.train, seed, options);

  const auto& test = benchmark.test.samples;
  std::vector<std::size_t> keep(test.size());
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  if (options.test_limit != 0 && options.test_limit < test.size()) {
    keep = seeded_subset(test.size(), options.test_limit,
                         root.derive("test_subset"));
  }
  for (std::size_t i : keep) {
    split.test.push_back({to_network_input(test[i].image), test[i].source_id,
                          test[i].class_tag == normal_class ? 0 : 1, -1});
  }
  const auto anomalies = std::count_if(
      split.test.begin(), split.test.end(),
      [](const TestItem& t) { return t.label == 1; });
  if (anomalies == 0 || anomalies == static_cast<long>(split.test.size())) {
    throw DataError("split: test set lacks one of the two classes");
  }
  return split;
}

}  // namespace adacl
