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

#include "adacl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "adacl/error.hpp"
#include "adacl/csv.hpp"

namespace adacl {
namespace {

// Indices sorted by descending score.
std::vector<std::size_t> descending_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

std::size_t ScoredSet::negatives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 0));
}

void ScoredSet::validate(bool both_classes) const {
  if (scores.size() != labels.size()) {
    throw Error("metrics: " + std::to_string(scores.size()) + " scores but " +
                std::to_string(labels.size()) + " labels");
  }
  if (scores.empty()) throw Error("metrics: empty scored set");
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw Error("metrics: labels must be 0 or 1, got " +
                  std::to_string(label));
    }
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error("metrics: non-finite score");
  }
  if (both_classes && (positives() == 0 || negatives() == 0)) {
    throw Error("metrics: both classes must be present (positives " +
                std::to_string(positives()) + ", negatives " +
                std::to_string(negatives()) + ")");
  }
}

double auroc(const ScoredSet& set) {
  set.validate();
  const std::size_t n = set.scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.scores[a] < set.scores[b];
  });
  // Sum of 1-based mid-ranks of the positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && set.scores[order[j]] == set.scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (set.labels[order[k]] == 1) rank_sum += mid_rank;
    }
    i = j;
  }
  const auto pos = static_cast<double>(set.positives());
  const auto neg = static_cast<double>(set.negatives());
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

std::vector<RocPoint> roc_curve(const ScoredSet& set) {
  set.validate();
  const auto pos = static_cast<double>(set.positives());
  const auto neg = static_cast<double>(set.negatives());
  const std::vector<std::size_t> order = descending_order(set.scores);
  std::vector<RocPoint> curve;
  curve.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = set.scores[order[i]];
    while (i < order.size() && set.scores[order[i]] == threshold) {
      (set.labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({threshold, fp / neg, tp / pos});
  }
  return curve;
}

double eer(const ScoredSet& set) {
  const std::vector<RocPoint> curve = roc_curve(set);
  // gap = FNR - FPR falls from 1 at the origin to -1 at (1, 1).
  auto gap = [](const RocPoint& p) { return (1.0 - p.tpr) - p.fpr; };
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double g0 = gap(curve[i - 1]);
    const double g1 = gap(curve[i]);
    if (g1 > 0.0) continue;
    const double t = g0 / (g0 - g1);
    return curve[i - 1].fpr + t * (curve[i].fpr - curve[i - 1].fpr);
  }
  return 1.0;
}

RunAggregate aggregate_runs(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error("aggregate_runs: need at least 2 runs, got " +
                std::to_string(values.size()));
  }
  RunAggregate agg;
  agg.values.assign(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  // One correction pass removes the rounding left in the first mean, so a
  // constant list reports exactly zero variance.
  double residual = 0.0;
  for (double v : values) residual += v - agg.mean;
  agg.mean += residual / n;
  double ss = 0.0;
  for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
  agg.variance = ss / n;
  return agg;
}

void write_roc_csv(std::ostream& out, std::span<const RocPoint> curve) {
  out << "threshold,fpr,tpr\n";
  for (const RocPoint& p : curve) {
    out << csv::number(p.threshold) << ',' << csv::number(p.fpr) << ','
        << csv::number(p.tpr) << '\n';
  }
}

}  // namespace adacl
