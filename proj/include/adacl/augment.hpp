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

#ifndef ADACL_AUGMENT_HPP_
#define ADACL_AUGMENT_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "adacl/image.hpp"
#include "adacl/rng.hpp"

namespace adacl {

enum class AugmentKind { kCutPaste, kPuzzle, kRotate, kMixup };

inline constexpr std::array<AugmentKind, 4> kAllAugmentKinds = {
    AugmentKind::kCutPaste, AugmentKind::kPuzzle, AugmentKind::kRotate,
    AugmentKind::kMixup};

/// "cut_paste", "puzzle", "rotate", "mixup".
std::string_view augment_name(AugmentKind kind);
std::optional<AugmentKind> parse_augment_kind(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct AugmentConfig {
  std::vector<AugmentKind> enabled{kAllAugmentKinds.begin(),
                                   kAllAugmentKinds.end()};
  /// Patch side as a fraction of the image side.
  Interval patch_fraction{0.25, 0.50};
  /// Weight of the original image in mix-up.
  Interval mixup_alpha{0.4, 0.6};

  /// Throws ConfigError on an empty or duplicated enabled set or on ranges
  /// outside (0, 1).
  void validate() const;
};

// Cut-paste ------------------------------------------------------------------

struct CutPastePlan {
  std::size_t patch = 0;
  std::size_t src_y = 0, src_x = 0;
  std::size_t dst_y = 0, dst_x = 0;
};

/// Patch side = round(fraction * side) with fraction ~ U(patch_fraction);
/// source and destination corners are uniform and never coincide.
CutPastePlan plan_cut_paste(const Image& image, Interval patch_fraction,
                            RngStream& rng);
Image apply_cut_paste(const Image& image, const CutPastePlan& plan);
Image cut_paste(const Image& image, RngStream& rng,
                Interval patch_fraction = {0.25, 0.50});

// Puzzle ---------------------------------------------------------------------

/// Tiles are numbered 0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right.
/// Output tile i is filled from input tile perm[i].
using TilePermutation = std::array<std::size_t, 4>;

/// Uniform over the 23 non-identity permutations.
TilePermutation draw_tile_permutation(RngStream& rng);
TilePermutation inverse(const TilePermutation& perm);
Image apply_tile_permutation(const Image& image, const TilePermutation& perm);
Image puzzle(const Image& image, RngStream& rng);

// Rotation -------------------------------------------------------------------

/// Counter-clockwise rotation by k quarter turns, k in [0, 3]:
/// out[r][c] = in[c][W - 1 - r] for k = 1.
Image rotate90(const Image& image, int k);

// Mix-up ---------------------------------------------------------------------

struct MixupPlan {
  double alpha = 0.5;
  int quarter_turns = 1;
};

MixupPlan plan_mixup(Interval alpha, RngStream& rng);
/// alpha * image + (1 - alpha) * rotate90(image, k), pixelwise.
Image apply_mixup(const Image& image, const MixupPlan& plan);
Image mixup(const Image& image, RngStream& rng, Interval alpha = {0.4, 0.6});

// Dispatcher -----------------------------------------------------------------

struct Augmented {
  Image image;
  AugmentKind kind;
};

/// Applies one augmentation drawn uniformly from config.enabled. Rotation
/// uses one or three quarter turns. If the draw leaves the image unchanged
/// (e.g. a black patch pasted onto black background) the same augmentation
/// is redrawn, up to kMaxAnomalyRedraws times.
Augmented create_anomaly(const Image& image, const AugmentConfig& config,
                         RngStream& rng);

inline constexpr int kMaxAnomalyRedraws = 256;

}  // namespace adacl

#endif  // ADACL_AUGMENT_HPP_
