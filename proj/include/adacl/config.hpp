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

#ifndef ADACL_CONFIG_HPP_
#define ADACL_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adacl/training.hpp"
#include "adacl/video.hpp"

namespace adacl {

struct DatasetConfig {
  /// mnist | fmnist | cifar10 | ucsd
  std::string name = "mnist";
  /// Directory with the IDX files or the CIFAR-10 binary batches.
  std::string path;
  int normal_class = 0;
  std::size_t validation_size = 150;
  std::size_t train_limit = 0;
  std::size_t test_limit = 0;
  // Video protocol.
  std::string train_frames;
  std::string train_masks;
  std::string test_frames;
  std::string test_masks;
  std::size_t patch = 30;
  FrameAggregation frame_aggregation = FrameAggregation::kMax;

  bool is_video() const { return name == "ucsd"; }
};

struct ExperimentConfig {
  /// Normal classes to sweep; empty means every class of the dataset.
  std::vector<int> classes;
  std::size_t runs = 1;
};

/// Fully resolved run configuration. JSON sections: dataset, model, labels,
/// augment, optimizer, experiment, plus a top-level seed.
struct RunConfig {
  std::uint64_t seed = 0;
  DatasetConfig dataset;
  TrainConfig train;
  ExperimentConfig experiment;

  SplitOptions split_options() const;
  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Default epoch budget per dataset: 15 for cifar10, 10 otherwise.
std::size_t default_epochs(std::string_view dataset);

/// Parses a JSON document. Missing keys take defaults; unknown keys and
/// ill-typed values are ConfigErrors.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Resolved configuration as pretty-printed JSON (or one line when
/// `compact`).
std::string dump_config(const RunConfig& config, bool compact = false);

/// 16 hex digits identifying the resolved configuration.
std::string config_hash(const RunConfig& config);

}  // namespace adacl

#endif  // ADACL_CONFIG_HPP_
