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

#ifndef ADACL_RNG_HPP_
#define ADACL_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace adacl {

/// Seeded random stream. Substreams derived by (name, index) are a pure
/// function of the parent seed, so per-sample draws do not depend on the
/// order in which samples are processed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  RngStream derive(std::string_view name, std::uint64_t index = 0) const;
  RngStream derive(std::string_view name, std::uint64_t a,
                   std::uint64_t b) const;

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t index(std::size_t n);
  /// Uniform on {lo, ..., hi}.
  long integer(long lo, long hi);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace adacl

#endif  // ADACL_RNG_HPP_
