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

#ifndef ADACL_HARNESS_HPP_
#define ADACL_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adacl/config.hpp"
#include "adacl/metrics.hpp"
#include "adacl/training.hpp"
#include "adacl/video.hpp"

namespace adacl {

// Data -----------------------------------------------------------------------

/// Loads the configured dataset once and hands out protocol splits.
class DataSource {
 public:
  /// Loading is deferred to the first split() call.
  explicit DataSource(DatasetConfig config);
  /// In-memory image benchmark (tests, tools).
  DataSource(DatasetConfig config, Benchmark benchmark);

  const DatasetConfig& config() const { return config_; }

  /// One-vs-rest split for image datasets; `normal_class` is ignored for the
  /// video protocol. The latest split is cached.
  const ProtocolSplit& split(int normal_class, std::uint64_t seed,
                             const SplitOptions& options);

 private:
  void load();

  DatasetConfig config_;
  std::optional<Benchmark> benchmark_;
  std::optional<PatchSet> train_patches_;
  std::optional<PatchSet> test_patches_;
  std::string cached_key_;
  std::optional<ProtocolSplit> cached_;
};

// Evaluation -----------------------------------------------------------------

struct Evaluation {
  std::vector<double> item_scores;  // one per ProtocolSplit::test item
  /// What the metrics are computed on: test images, or frames whose score
  /// aggregates their patches.
  ScoredSet scored;
  std::vector<std::string> ids;  // one per scored entry
  bool frame_level = false;
  double auroc = 0.0;
  std::optional<double> eer;  // frame-level protocol only
  std::vector<RocPoint> roc;
};

Evaluation evaluate(const ModelParams<float>& params,
                    const ProtocolSplit& split, LossKind loss,
                    FrameAggregation aggregation = FrameAggregation::kMax);

/// Frame score from its patch scores.
double aggregate_frame(std::span<const double> patch_scores,
                       FrameAggregation aggregation);

// Plans ----------------------------------------------------------------------

enum class PlanKind {
  kClassSweep,
  kLossAblation,
  kLabelAblation,
  kAugmentAblation,
  kIntervalSweep,
  kVideo,
};

std::string_view plan_name(PlanKind kind);
std::optional<PlanKind> parse_plan_kind(std::string_view name);

struct ExperimentPlan {
  PlanKind kind = PlanKind::kClassSweep;
  RunConfig config;  // template for every cell
  std::vector<int> classes;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;

  /// Throws ConfigError when the plan cannot produce its report.
  void validate() const;
};

/// Classes default to 0..9 (a single pseudo-class for video data) and seeds
/// to config.seed, config.seed + 1, ... (experiment.runs of them).
ExperimentPlan make_plan(PlanKind kind, const RunConfig& config,
                         std::string output_dir = {});

// Cells ----------------------------------------------------------------------

struct CellResult {
  std::string variant;
  int normal_class = 0;
  std::uint64_t seed = 0;
  /// "ok", or the failure class: config | data | diverged | error.
  std::string status = "ok";
  std::string message;
  double test_auroc = 0.0;
  std::optional<double> test_eer;
  TrainHistory history;
  /// Test AUROC of the current weights after every epoch (curve cells only).
  std::vector<double> test_curve;

  bool ok() const { return status == "ok"; }
};

/// Runs (variant, class, seed) cells. Identical cells are trained once per
/// runner. The data split is seeded by the template seed so every cell of a
/// plan sees the same validation and test sets.
class ExperimentRunner {
 public:
  explicit ExperimentRunner(DataSource& data);

  void set_progress(std::function<void(const std::string&)> progress) {
    progress_ = std::move(progress);
  }

  /// `curves` forces the full epoch budget and records per-epoch test AUROC.
  CellResult run_cell(const std::string& variant, const RunConfig& config,
                      int normal_class, std::uint64_t seed, bool curves);

  std::size_t trained_cells() const { return trained_; }

 private:
  DataSource& data_;
  std::function<void(const std::string&)> progress_;
  std::map<std::string, CellResult> memo_;
  std::size_t trained_ = 0;
};

// Reports --------------------------------------------------------------------

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Writes `#`-prefixed reproducibility lines (plan, config hash, seeds,
/// resolved config) followed by the header row and the body.
void write_table(std::ostream& out, const CsvTable& table,
                 const ExperimentPlan& plan);

/// Body only: header row and data rows.
std::string table_body(const CsvTable& table);

struct ClassSweepReport {
  std::vector<int> classes;
  std::vector<RunAggregate> per_class;  // over successful seeds
  std::vector<std::size_t> ok_runs;
  double mean = 0.0;                    // over classes
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

struct LossAblationReport {
  std::vector<std::size_t> epochs;  // shared grid
  std::vector<double> mse_val, mse_test, bce_val, bce_test;  // seed means
  /// First epoch with validation AUROC >= 0.9 per seed (class-averaged
  /// curves); nullopt when never reached.
  std::vector<std::optional<std::size_t>> mse_epochs_to_target;
  std::vector<std::optional<std::size_t>> bce_epochs_to_target;
  std::size_t seeds_mse_not_slower = 0;
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

struct LabelAblationReport {
  std::vector<std::size_t> epochs;
  /// Variance over seeds of the class-averaged validation AUROC.
  std::vector<double> cl_val_variance, dl_val_variance;
  std::vector<int> classes;
  std::vector<RunAggregate> cl_test, dl_test;  // per class
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

struct AugmentRow {
  std::string label;
  bool reference = false;  // the all-augmentations row
  RunAggregate test_auroc;  // over seeds, class-averaged
};

struct AugmentAblationReport {
  std::vector<AugmentRow> rows;
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

struct IntervalRow {
  std::string label;
  LabelScheme labels;
  RunAggregate test_auroc;
};

struct IntervalSweepReport {
  std::vector<IntervalRow> rows;
  double spread_points = 0.0;  // max - min of the row means, in AUROC %
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

struct VideoReport {
  RunAggregate auroc;
  RunAggregate eer;
  std::vector<CellResult> cells;
  std::vector<CsvTable> tables;
};

inline constexpr double kCurveTarget = 0.9;

/// The interval pairs of the label-interval study.
std::vector<LabelScheme> interval_pairs();
std::string interval_label(const LabelScheme& scheme);

ClassSweepReport run_class_sweep(const ExperimentPlan& plan,
                                 ExperimentRunner& runner);
LossAblationReport run_loss_ablation(const ExperimentPlan& plan,
                                     ExperimentRunner& runner);
LabelAblationReport run_label_ablation(const ExperimentPlan& plan,
                                       ExperimentRunner& runner);
AugmentAblationReport run_augment_ablation(const ExperimentPlan& plan,
                                           ExperimentRunner& runner);
IntervalSweepReport run_interval_sweep(const ExperimentPlan& plan,
                                       ExperimentRunner& runner);
VideoReport run_video(const ExperimentPlan& plan, ExperimentRunner& runner);

struct PlanOutput {
  std::vector<CsvTable> tables;
  std::vector<CellResult> cells;
};

/// Dispatches on plan.kind.
PlanOutput run_plan(const ExperimentPlan& plan, ExperimentRunner& runner);

/// JSON manifest: plan kind, config hash, resolved config, seeds, classes and
/// per-cell status.
std::string manifest_json(const ExperimentPlan& plan,
                          const std::vector<CellResult>& cells);

}  // namespace adacl

#endif  // ADACL_HARNESS_HPP_
