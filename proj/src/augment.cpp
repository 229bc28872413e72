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

#include "adacl/augment.hpp"

#include <algorithm>
#include <cmath>

#include "adacl/error.hpp"

namespace adacl {
namespace {

constexpr TilePermutation kIdentity = {0, 1, 2, 3};

void require_square(const Image& image, const char* op) {
  if (!image.square()) {
    throw ShapeError(std::string(op) + ": image must be square, got " +
                     std::to_string(image.height()) + "x" +
                     std::to_string(image.width()));
  }
}

void check_interval(const Interval& range, const char* what) {
  if (!(range.lo > 0.0 && range.hi < 1.0 && range.lo <= range.hi)) {
    throw ConfigError(std::string("augment: ") + what +
                      " range must satisfy 0 < lo <= hi < 1");
  }
}

Image apply(AugmentKind kind, const Image& image, const AugmentConfig& config,
            RngStream& rng) {
  switch (kind) {
    case AugmentKind::kCutPaste:
      return cut_paste(image, rng, config.patch_fraction);
    case AugmentKind::kPuzzle:
      return puzzle(image, rng);
    case AugmentKind::kRotate:
      return rotate90(image, rng.index(2) == 0 ? 1 : 3);
    case AugmentKind::kMixup:
      return mixup(image, rng, config.mixup_alpha);
  }
  throw ConfigError("augment: unknown kind");
}

}  // namespace

std::string_view augment_name(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kCutPaste:
      return "cut_paste";
    case AugmentKind::kPuzzle:
      return "puzzle";
    case AugmentKind::kRotate:
      return "rotate";
    case AugmentKind::kMixup:
      return "mixup";
  }
  return "unknown";
}

std::optional<AugmentKind> parse_augment_kind(std::string_view name) {
  for (AugmentKind kind : kAllAugmentKinds) {
    if (augment_name(kind) == name) return kind;
  }
  return std::nullopt;
}

void AugmentConfig::validate() const {
  if (enabled.empty()) {
    throw ConfigError("augment: enabled set is empty");
  }
  for (std::size_t i = 0; i < enabled.size(); ++i) {
    for (std::size_t j = i + 1; j < enabled.size(); ++j) {
      if (enabled[i] == enabled[j]) {
        throw ConfigError("augment: '" + std::string(augment_name(enabled[i])) +
                          "' listed twice");
      }
    }
  }
  check_interval(patch_fraction, "patch_fraction");
  check_interval(mixup_alpha, "mixup_alpha");
}

CutPastePlan plan_cut_paste(const Image& image, Interval patch_fraction,
                            RngStream& rng) {
  require_square(image, "cut_paste");
  const std::size_t side = image.height();
  if (side < 8) {
    throw ShapeError("cut_paste: image side " + std::to_string(side) +
                     " is too small to host a patch (minimum 8)");
  }
  const double fraction = rng.uniform(patch_fraction.lo, patch_fraction.hi);
  const auto patch = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(fraction * side)), 1, side - 1);
  const std::size_t positions = side - patch + 1;
  CutPastePlan plan;
  plan.patch = patch;
  plan.src_y = rng.index(positions);
  plan.src_x = rng.index(positions);
  do {
    plan.dst_y = rng.index(positions);
    plan.dst_x = rng.index(positions);
  } while (plan.dst_y == plan.src_y && plan.dst_x == plan.src_x);
  return plan;
}

Image apply_cut_paste(const Image& image, const CutPastePlan& plan) {
  const std::size_t side = image.height();
  if (plan.patch == 0 || plan.src_y + plan.patch > side ||
      plan.src_x + plan.patch > image.width() ||
      plan.dst_y + plan.patch > side || plan.dst_x + plan.patch > image.width()) {
    throw ShapeError("cut_paste: patch rectangle leaves the image");
  }
  Image out = image;
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t y = 0; y < plan.patch; ++y) {
      for (std::size_t x = 0; x < plan.patch; ++x) {
        out.at(c, plan.dst_y + y, plan.dst_x + x) =
            image.at(c, plan.src_y + y, plan.src_x + x);
      }
    }
  }
  return out;
}

Image cut_paste(const Image& image, RngStream& rng, Interval patch_fraction) {
  return apply_cut_paste(image, plan_cut_paste(image, patch_fraction, rng));
}

TilePermutation draw_tile_permutation(RngStream& rng) {
  TilePermutation perm = kIdentity;
  do {
    perm = kIdentity;
    std::shuffle(perm.begin(), perm.end(), rng.engine());
  } while (perm == kIdentity);
  return perm;
}

TilePermutation inverse(const TilePermutation& perm) {
  TilePermutation inv{};
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

Image apply_tile_permutation(const Image& image, const TilePermutation& perm) {
  if (image.height() % 2 != 0 || image.width() % 2 != 0) {
    throw ShapeError("puzzle: image sides must be even, got " +
                     std::to_string(image.height()) + "x" +
                     std::to_string(image.width()));
  }
  const std::size_t th = image.height() / 2;
  const std::size_t tw = image.width() / 2;
  Image out(image.channels(), image.height(), image.width());
  for (std::size_t tile = 0; tile < 4; ++tile) {
    const std::size_t src = perm[tile];
    const std::size_t oy = (tile / 2) * th, ox = (tile % 2) * tw;
    const std::size_t sy = (src / 2) * th, sx = (src % 2) * tw;
    for (std::size_t c = 0; c < image.channels(); ++c) {
      for (std::size_t y = 0; y < th; ++y) {
        for (std::size_t x = 0; x < tw; ++x) {
          out.at(c, oy + y, ox + x) = image.at(c, sy + y, sx + x);
        }
      }
    }
  }
  return out;
}

Image puzzle(const Image& image, RngStream& rng) {
  if (image.height() % 2 != 0 || image.width() % 2 != 0) {
    throw ShapeError("puzzle: image sides must be even, got " +
                     std::to_string(image.height()) + "x" +
                     std::to_string(image.width()));
  }
  return apply_tile_permutation(image, draw_tile_permutation(rng));
}

Image rotate90(const Image& image, int k) {
  require_square(image, "rotate90");
  if (k < 0 || k > 3) {
    throw ShapeError("rotate90: quarter turns must be in [0, 3], got " +
                     std::to_string(k));
  }
  const std::size_t n = image.height();
  Image out = image;
  for (int turn = 0; turn < k; ++turn) {
    const Image src = out;
    for (std::size_t c = 0; c < image.channels(); ++c) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t col = 0; col < n; ++col) {
          out.at(c, r, col) = src.at(c, col, n - 1 - r);
        }
      }
    }
  }
  return out;
}

MixupPlan plan_mixup(Interval alpha, RngStream& rng) {
  MixupPlan plan;
  plan.alpha = rng.uniform(alpha.lo, alpha.hi);
  plan.quarter_turns = static_cast<int>(rng.integer(1, 3));
  return plan;
}

Image apply_mixup(const Image& image, const MixupPlan& plan) {
  const Image rotated = rotate90(image, plan.quarter_turns);
  const auto alpha = static_cast<float>(plan.alpha);
  Image out = image;
  auto dst = out.pixels();
  const auto other = rotated.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const float a = dst[i];
    const float b = other[i];
    // b + alpha * (a - b) is exact when a == b; the clamp absorbs rounding
    // so the result never leaves [min(a, b), max(a, b)].
    dst[i] = std::clamp(b + alpha * (a - b), std::min(a, b), std::max(a, b));
  }
  return out;
}

Image mixup(const Image& image, RngStream& rng, Interval alpha) {
  require_square(image, "mixup");
  return apply_mixup(image, plan_mixup(alpha, rng));
}

Augmented create_anomaly(const Image& image, const AugmentConfig& config,
                         RngStream& rng) {
  config.validate();
  const AugmentKind kind = config.enabled[rng.index(config.enabled.size())];
  Image out = apply(kind, image, config, rng);
  for (int attempt = 1; attempt < kMaxAnomalyRedraws && out == image;
       ++attempt) {
    out = apply(kind, image, config, rng);
  }
  return {std::move(out), kind};
}

}  // namespace adacl
