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

#ifndef ADACL_VIDEO_HPP_
#define ADACL_VIDEO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adacl/data.hpp"
#include "adacl/image.hpp"

namespace adacl {

struct PatchOptions {
  std::size_t patch = 30;
  std::size_t resize = 32;
};

struct Patch {
  Image image;          // resized to options.resize
  std::size_t frame = 0;
  std::size_t row = 0;  // grid cell
  std::size_t col = 0;
  int anomalous = 0;    // any set mask pixel inside the cell
};

/// Non-overlapping patch grid over one grayscale frame; bottom and right
/// remainders are dropped. With a mask (same size as the frame) a cell is
/// anomalous iff any mask pixel inside it is non-zero.
std::vector<Patch> frame_patches(const Image& frame, const Image* mask,
                                 std::size_t frame_index,
                                 const PatchOptions& options = {});

struct PatchSet {
  std::vector<Patch> patches;
  std::vector<std::string> frame_ids;  // relative paths, lexicographic
  std::vector<int> frame_labels;       // any mask pixel set in the frame
  bool has_masks = false;
};

/// Image files (.pgm, .ppm, .png) under `dir`, recursively, ordered by
/// relative path.
std::vector<std::string> list_frames(const std::string& dir);

/// Extracts patches from every frame under `frame_dir`. Masks, if given, are
/// looked up under `mask_dir` by the frame's relative path. All frames must
/// share one size; colour frames are converted to grayscale.
PatchSet extract_patches(const std::string& frame_dir,
                         const std::optional<std::string>& mask_dir,
                         const PatchOptions& options = {});

enum class FrameAggregation { kMax, kMean };

/// Video protocol split. Training keeps the normal patches of the training
/// frames (all patches when no training masks exist); testing scores every
/// patch of the test frames and groups them by frame.
ProtocolSplit make_patch_split(const PatchSet& train, const PatchSet& test,
                               std::uint64_t seed, const SplitOptions& options);

}  // namespace adacl

#endif  // ADACL_VIDEO_HPP_
