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

#ifndef ADACL_DATA_HPP_
#define ADACL_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adacl/augment.hpp"
#include "adacl/image.hpp"

namespace adacl {

/// A loaded image with its provenance. `class_tag` is only used to build
/// protocol splits and never reaches training.
struct ImageSample {
  Image image;
  std::string source_id;
  int class_tag = -1;
};

struct Dataset {
  std::string name;
  std::vector<ImageSample> samples;
};

/// Official train/test partitions of an image benchmark.
struct Benchmark {
  Dataset train;
  Dataset test;
};

// IDX ------------------------------------------------------------------------

/// Raw unsigned-byte IDX array.
struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> bytes;
};

/// Parses a big-endian IDX stream with magic 0x0000 08 <ndims> (unsigned
/// byte payload). Throws DataError on a bad magic, a size overflow or a
/// truncated payload.
IdxArray read_idx(std::istream& in, const std::string& origin = "<stream>");
IdxArray read_idx_file(const std::string& path);

/// Pairs an images file (magic 0x00000803) with a labels file (0x00000801).
/// Pixels are scaled to [0, 1].
Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 const std::string& name = "idx");

/// MNIST / Fashion-MNIST directory with the four standard file names
/// ({train,t10k}-{images-idx3,labels-idx1}-ubyte).
Benchmark load_idx_benchmark(const std::string& dir, const std::string& name);

// CIFAR-10 -------------------------------------------------------------------

inline constexpr std::size_t kCifarRecordBytes = 3073;

/// Reads CIFAR-10 binary batches: 3073-byte records of one label byte (0-9)
/// followed by 1024 red, 1024 green and 1024 blue bytes.
Dataset load_cifar(std::span<const std::string> paths,
                   const std::string& name = "cifar10");

/// Directory with data_batch_{1..5}.bin and test_batch.bin.
Benchmark load_cifar_benchmark(const std::string& dir);

// Protocol -------------------------------------------------------------------

/// k distinct indices of {0, ..., n - 1} drawn from `rng`, ascending.
std::vector<std::size_t> seeded_subset(std::size_t n, std::size_t k,
                                       RngStream rng);

/// Brings a benchmark image to the network's 32x32 input (28x28 images are
/// zero-padded; larger images are rejected).
Image to_network_input(const Image& image);

struct TestItem {
  Image image;
  std::string id;
  int label = 0;     // 1 = anomaly
  long group = -1;   // frame index for patch datasets, -1 otherwise
};

struct ValidationSet {
  std::vector<Image> images;
  std::vector<int> labels;  // 150 zeros followed by 150 ones by default
  std::vector<std::size_t> normal_indices;  // indices into ProtocolSplit::train
};

struct ProtocolSplit {
  std::vector<Image> train;  // normal class only
  std::vector<TestItem> test;
  ValidationSet validation;
  /// Frame-level ground truth for patch datasets, indexed by TestItem::group.
  std::vector<int> group_labels;
  std::vector<std::string> group_ids;
  std::size_t channels() const;
};

struct SplitOptions {
  std::size_t validation_size = 150;
  /// 0 keeps every training normal; otherwise a seeded subset of that size.
  std::size_t train_limit = 0;
  /// 0 keeps the whole test set; otherwise a seeded subset with both classes.
  std::size_t test_limit = 0;
  AugmentConfig augment;
};

/// One-vs-rest split: training keeps the normal class of the official
/// training partition, the test partition is relabelled 0 (normal class) /
/// 1 (everything else), and the validation set pairs `validation_size`
/// seeded training normals (which stay in the training pool) with one
/// created anomaly each.
ProtocolSplit make_protocol_split(const Benchmark& benchmark, int normal_class,
                                  std::uint64_t seed,
                                  const SplitOptions& options = {});

/// Validation set for an arbitrary pool of normal images.
ValidationSet make_validation_set(std::span<const Image> normals,
                                  std::uint64_t seed,
                                  const SplitOptions& options);

}  // namespace adacl

#endif  // ADACL_DATA_HPP_
