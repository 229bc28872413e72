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

#ifndef ADACL_LABELLING_HPP_
#define ADACL_LABELLING_HPP_

#include <string_view>

#include "adacl/rng.hpp"

namespace adacl {

enum class LabelMode { kContinuous, kDiscrete };
enum class SampleClass { kNormal, kAnomaly };

std::string_view label_mode_name(LabelMode mode);

/// Continuous labelling draws normal targets from [0, normal_upper] and
/// anomaly targets from [anomaly_lower, 1]; discrete labelling uses 0 / 1
/// and ignores the bounds.
struct LabelScheme {
  LabelMode mode = LabelMode::kContinuous;
  double normal_upper = 0.3;
  double anomaly_lower = 0.7;

  static LabelScheme continuous(double normal_upper, double anomaly_lower) {
    return {LabelMode::kContinuous, normal_upper, anomaly_lower};
  }
  static LabelScheme discrete() { return {LabelMode::kDiscrete, 0.0, 1.0}; }

  /// Continuous mode requires 0 <= normal_upper < anomaly_lower <= 1.
  void validate() const;
};

double sample_label(SampleClass cls, const LabelScheme& scheme,
                    RngStream& rng);

struct ExpectedLoss {
  double normal = 0.0;
  double anomaly = 0.0;
};

/// E[(0.5 - L)^2] for L drawn from each class's label distribution, i.e.
/// (0.5 - mean)^2 + width^2 / 12 for a uniform interval.
ExpectedLoss expected_mse_at_half(const LabelScheme& scheme);

}  // namespace adacl

#endif  // ADACL_LABELLING_HPP_
