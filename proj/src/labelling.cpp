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

#include "adacl/labelling.hpp"

#include <string>

#include "adacl/error.hpp"

namespace adacl {
namespace {

double expected_sq_dev_from_half(double lo, double hi) {
  const double mean = 0.5 * (lo + hi);
  const double width = hi - lo;
  return (0.5 - mean) * (0.5 - mean) + width * width / 12.0;
}

}  // namespace

std::string_view label_mode_name(LabelMode mode) {
  return mode == LabelMode::kContinuous ? "continuous" : "discrete";
}

void LabelScheme::validate() const {
  if (mode == LabelMode::kDiscrete) return;
  if (!(0.0 <= normal_upper && normal_upper < anomaly_lower &&
        anomaly_lower <= 1.0)) {
    throw ConfigError("labels: need 0 <= normal_upper < anomaly_lower <= 1, got " +
                      std::to_string(normal_upper) + " and " +
                      std::to_string(anomaly_lower));
  }
}

double sample_label(SampleClass cls, const LabelScheme& scheme,
                    RngStream& rng) {
  scheme.validate();
  if (scheme.mode == LabelMode::kDiscrete) {
    return cls == SampleClass::kNormal ? 0.0 : 1.0;
  }
  if (cls == SampleClass::kNormal) return rng.uniform(0.0, scheme.normal_upper);
  return rng.uniform(scheme.anomaly_lower, 1.0);
}

ExpectedLoss expected_mse_at_half(const LabelScheme& scheme) {
  scheme.validate();
  if (scheme.mode == LabelMode::kDiscrete) return {0.25, 0.25};
  return {expected_sq_dev_from_half(0.0, scheme.normal_upper),
          expected_sq_dev_from_half(scheme.anomaly_lower, 1.0)};
}

}  // namespace adacl
