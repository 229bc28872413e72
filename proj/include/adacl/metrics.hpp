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

#ifndef ADACL_METRICS_HPP_
#define ADACL_METRICS_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace adacl {

/// Anomaly scores with binary ground truth (1 = anomaly).
struct ScoredSet {
  std::vector<double> scores;
  std::vector<int> labels;

  std::size_t positives() const;
  std::size_t negatives() const;
  /// Throws Error on length mismatch, empty input, non-binary labels or
  /// non-finite scores; with `both_classes` also when a class is missing.
  void validate(bool both_classes = true) const;
};

/// Probability that a random anomaly outscores a random normal sample, ties
/// counting one half (the Mann-Whitney statistic, equal to the trapezoidal
/// ROC area).
double auroc(const ScoredSet& set);

struct RocPoint {
  double threshold;  // score >= threshold is flagged; +inf for the origin
  double fpr;
  double tpr;
};

/// ROC polyline from (0, 0) to (1, 1), one vertex per distinct score.
std::vector<RocPoint> roc_curve(const ScoredSet& set);

/// False-positive rate where FPR = 1 - TPR, linearly interpolated along the
/// ROC polyline.
double eer(const ScoredSet& set);

/// Mean and population variance (divide by n) over repeated runs.
struct RunAggregate {
  std::vector<double> values;
  double mean = 0.0;
  double variance = 0.0;
};

RunAggregate aggregate_runs(std::span<const double> values);

/// CSV with header "threshold,fpr,tpr".
void write_roc_csv(std::ostream& out, std::span<const RocPoint> curve);

}  // namespace adacl

#endif  // ADACL_METRICS_HPP_
