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

#include "adacl/video.hpp"

#include <algorithm>
#include <filesystem>

#include "adacl/error.hpp"

namespace fs = std::filesystem;

namespace adacl {
namespace {

bool is_frame_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".png";
}

}  // namespace

std::vector<Patch> frame_patches(const Image& frame, const Image* mask,
                                 std::size_t frame_index,
                                 const PatchOptions& options) {
  if (options.patch == 0 || options.resize == 0) {
    throw ConfigError("patches: patch and resize sizes must be positive");
  }
  if (frame.channels() != 1) {
    throw ShapeError("patches: frames must be grayscale");
  }
  if (mask && (mask->height() != frame.height() ||
               mask->width() != frame.width())) {
    throw DataError("patches: mask " + std::to_string(mask->height()) + "x" +
                    std::to_string(mask->width()) + " does not match frame " +
                    std::to_string(frame.height()) + "x" +
                    std::to_string(frame.width()));
  }
  const std::size_t rows = frame.height() / options.patch;
  const std::size_t cols = frame.width() / options.patch;
  std::vector<Patch> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t top = r * options.patch, left = c * options.patch;
      Patch p;
      p.image = resize_bilinear(
          crop(frame, top, left, options.patch, options.patch), options.resize,
          options.resize);
      p.frame = frame_index;
      p.row = r;
      p.col = c;
      if (mask) {
        for (std::size_t y = top; y < top + options.patch && !p.anomalous; ++y) {
          for (std::size_t x = left; x < left + options.patch; ++x) {
            bool set = false;
            for (std::size_t ch = 0; ch < mask->channels(); ++ch) {
              set = set || mask->at(ch, y, x) > 0.0f;
            }
            if (set) {
              p.anomalous = 1;
              break;
            }
          }
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<std::string> list_frames(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("patches: frame directory " + dir + " does not exist");
  }
  std::vector<std::string> rel;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) {
      rel.push_back(fs::relative(entry.path(), dir).generic_string());
    }
  }
  std::sort(rel.begin(), rel.end());
  return rel;
}

PatchSet extract_patches(const std::string& frame_dir,
                         const std::optional<std::string>& mask_dir,
                         const PatchOptions& options) {
  PatchSet set;
  set.frame_ids = list_frames(frame_dir);
  if (set.frame_ids.empty()) {
    throw DataError("patches: no .pgm/.ppm/.png frames under " + frame_dir);
  }
  set.has_masks = mask_dir.has_value();
  std::size_t height = 0, width = 0;
  for (std::size_t f = 0; f < set.frame_ids.size(); ++f) {
    const std::string& rel = set.frame_ids[f];
    const Image frame = to_grayscale(read_image((fs::path(frame_dir) / rel).string()));
    if (f == 0) {
      height = frame.height();
      width = frame.width();
    } else if (frame.height() != height || frame.width() != width) {
      throw DataError("patches: frame " + rel + " differs in size from " +
                      set.frame_ids.front());
    }
    std::optional<Image> mask;
    int frame_label = 0;
    if (mask_dir) {
      mask = read_image((fs::path(*mask_dir) / rel).string());
      for (float v : mask->pixels()) {
        if (v > 0.0f) {
          frame_label = 1;
          break;
        }
      }
    }
    auto patches = frame_patches(frame, mask ? &*mask : nullptr, f, options);
    for (auto& p : patches) set.patches.push_back(std::move(p));
    set.frame_labels.push_back(frame_label);
  }
  return set;
}

ProtocolSplit make_patch_split(const PatchSet& train, const PatchSet& test,
                               std::uint64_t seed, const SplitOptions& options) {
  options.augment.validate();
  ProtocolSplit split;
  for (const Patch& p : train.patches) {
    if (!p.anomalous) split.train.push_back(p.image);
  }
  if (split.train.empty()) throw DataError("patches: no normal training patches");
  if (options.train_limit != 0 && options.train_limit < split.train.size()) {
    const auto idx = seeded_subset(split.train.size(), options.train_limit,
                                   RngStream(seed).derive("train_subset"));
    std::vector<Image> kept;
    for (std::size_t i : idx) kept.push_back(split.train[i]);
    split.train = std::move(kept);
  }
  split.validation = make_validation_set(split.train, seed, options);
  if (!test.has_masks) {
    throw DataError("patches: test frames need masks for frame-level labels");
  }
  for (const Patch& p : test.patches) {
    split.test.push_back({p.image,
                          test.frame_ids[p.frame] + "#" + std::to_string(p.row) +
                              "," + std::to_string(p.col),
                          p.anomalous, static_cast<long>(p.frame)});
  }
  split.group_labels = test.frame_labels;
  split.group_ids = test.frame_ids;
  return split;
}

}  // namespace adacl
