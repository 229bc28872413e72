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

#include <gtest/gtest.h>

#include "adacl/error.hpp"
#include "adacl/labelling.hpp"

namespace adacl {
namespace {

TEST(Labels, DegenerateNormalIntervalIsZero) {
  RngStream rng(1);
  const LabelScheme s = LabelScheme::continuous(0.0, 0.7);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(sample_label(SampleClass::kNormal, s, rng), 0.0);
}

TEST(Labels, ContinuousMomentsAndRange) {
  RngStream rng(2);
  const LabelScheme s;
  double sum = 0.0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const double v = sample_label(SampleClass::kNormal, s, rng);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 0.3);
    sum += v;
  }
  EXPECT_NEAR(sum / kN, 0.15, 0.002);
  for (int i = 0; i < 1000; ++i) {
    const double v = sample_label(SampleClass::kAnomaly, s, rng);
    EXPECT_GE(v, 0.7);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Labels, DiscreteIsZeroOrOne) {
  RngStream rng(3);
  const LabelScheme s = LabelScheme::discrete();
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_label(SampleClass::kNormal, s, rng), 0.0);
    EXPECT_EQ(sample_label(SampleClass::kAnomaly, s, rng), 1.0);
  }
}

TEST(Labels, ExpectedMseAtHalf) {
  const ExpectedLoss cl = expected_mse_at_half(LabelScheme{});
  EXPECT_NEAR(cl.normal, 0.13, 1e-15);
  EXPECT_NEAR(cl.anomaly, 0.13, 1e-15);
  const ExpectedLoss dl = expected_mse_at_half(LabelScheme::discrete());
  EXPECT_EQ(dl.normal, 0.25);
  EXPECT_EQ(dl.anomaly, 0.25);
}

TEST(Labels, ContinuousAlwaysBelowDiscrete) {
  for (int a = 1; a < 50; ++a) {
    for (int b = a + 1; b < 100; ++b) {
      const ExpectedLoss e =
          expected_mse_at_half(LabelScheme::continuous(a / 100.0, b / 100.0));
      EXPECT_LT(e.normal, 0.25);
      EXPECT_LT(e.anomaly, 0.25);
    }
  }
}

TEST(Labels, EmpiricalMseMatchesAnalytic) {
  RngStream rng(4);
  const LabelScheme s = LabelScheme::continuous(0.2, 0.9);
  const ExpectedLoss e = expected_mse_at_half(s);
  double normal = 0.0, anomaly = 0.0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const double n = sample_label(SampleClass::kNormal, s, rng) - 0.5;
    const double a = sample_label(SampleClass::kAnomaly, s, rng) - 0.5;
    normal += n * n;
    anomaly += a * a;
  }
  EXPECT_NEAR(normal / kN, e.normal, 0.003);
  EXPECT_NEAR(anomaly / kN, e.anomaly, 0.003);
}

TEST(Labels, Validation) {
  EXPECT_THROW(LabelScheme::continuous(0.7, 0.3).validate(), ConfigError);
  EXPECT_THROW(LabelScheme::continuous(-0.1, 0.7).validate(), ConfigError);
  EXPECT_THROW(LabelScheme::continuous(0.3, 1.2).validate(), ConfigError);
  EXPECT_THROW(LabelScheme::continuous(0.5, 0.5).validate(), ConfigError);
  EXPECT_NO_THROW(LabelScheme::continuous(0.0, 1.0).validate());
  EXPECT_EQ(label_mode_name(LabelMode::kContinuous), "continuous");
  EXPECT_EQ(label_mode_name(LabelMode::kDiscrete), "discrete");
}

}  // namespace
}  // namespace adacl
