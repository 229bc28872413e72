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

#include "adacl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "adacl/csv.hpp"
#include "adacl/error.hpp"
#include "json.hpp"

namespace adacl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string split_key(int normal_class, std::uint64_t seed,
                      const SplitOptions& o) {
  std::ostringstream key;
  key << normal_class << '|' << seed << '|' << o.validation_size << '|'
      << o.train_limit << '|' << o.test_limit << '|';
  for (AugmentKind k : o.augment.enabled) key << augment_name(k) << ',';
  key << '|' << csv::number(o.augment.patch_fraction.lo) << ','
      << csv::number(o.augment.patch_fraction.hi) << ','
      << csv::number(o.augment.mixup_alpha.lo) << ','
      << csv::number(o.augment.mixup_alpha.hi);
  return key.str();
}

// Mean / population variance that tolerates fewer than two values.
RunAggregate summarize(const std::vector<double>& values) {
  if (values.size() >= 2) return aggregate_runs(values);
  RunAggregate out;
  out.values = values;
  out.mean = values.empty() ? kNaN : values.front();
  out.variance = values.empty() ? kNaN : 0.0;
  return out;
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return kNaN;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string percent(double fraction) { return csv::number(fraction * 100.0); }

// Cells of one variant indexed [class][seed].
class Grid {
 public:
  Grid(const ExperimentPlan& plan, ExperimentRunner& runner,
       const std::string& variant, const RunConfig& config, bool curves,
       std::vector<CellResult>& log) {
    cells_.resize(plan.classes.size());
    for (std::size_t c = 0; c < plan.classes.size(); ++c) {
      for (std::uint64_t seed : plan.seeds) {
        cells_[c].push_back(
            runner.run_cell(variant, config, plan.classes[c], seed, curves));
        log.push_back(cells_[c].back());
      }
    }
  }

  const CellResult& at(std::size_t c, std::size_t s) const {
    return cells_[c][s];
  }
  std::size_t classes() const { return cells_.size(); }
  std::size_t seeds() const { return cells_.empty() ? 0 : cells_[0].size(); }

  // Class-averaged test AUROC of one seed; nullopt if any class failed.
  std::optional<double> seed_test_auroc(std::size_t s) const {
    std::vector<double> values;
    for (std::size_t c = 0; c < classes(); ++c) {
      if (!at(c, s).ok()) return std::nullopt;
      values.push_back(at(c, s).test_auroc);
    }
    return mean_of(values);
  }

  // Class-averaged per-epoch validation (or test) curve of one seed.
  std::optional<std::vector<double>> seed_curve(std::size_t s,
                                                bool test) const {
    std::vector<double> sum;
    for (std::size_t c = 0; c < classes(); ++c) {
      const CellResult& cell = at(c, s);
      if (!cell.ok()) return std::nullopt;
      std::vector<double> curve;
      if (test) {
        curve = cell.test_curve;
      } else {
        for (const EpochRecord& r : cell.history.epochs)
          curve.push_back(r.val_auroc);
      }
      if (sum.empty()) sum.assign(curve.size(), 0.0);
      if (curve.size() != sum.size()) return std::nullopt;
      for (std::size_t e = 0; e < curve.size(); ++e) sum[e] += curve[e];
    }
    for (double& v : sum) v /= static_cast<double>(classes());
    return sum;
  }

  RunAggregate class_test_auroc(std::size_t c) const {
    std::vector<double> values;
    for (std::size_t s = 0; s < seeds(); ++s) {
      if (at(c, s).ok()) values.push_back(at(c, s).test_auroc);
    }
    return summarize(values);
  }

  RunAggregate test_auroc() const {
    std::vector<double> values;
    for (std::size_t s = 0; s < seeds(); ++s) {
      if (auto v = seed_test_auroc(s)) values.push_back(*v);
    }
    return summarize(values);
  }

 private:
  std::vector<std::vector<CellResult>> cells_;
};

std::vector<std::vector<double>> seed_curves(const Grid& grid, bool test) {
  std::vector<std::vector<double>> out;
  for (std::size_t s = 0; s < grid.seeds(); ++s) {
    if (auto curve = grid.seed_curve(s, test)) out.push_back(*curve);
  }
  return out;
}

std::vector<double> mean_curve(const std::vector<std::vector<double>>& curves,
                               std::size_t epochs) {
  std::vector<double> out(epochs, kNaN);
  if (curves.empty()) return out;
  for (std::size_t e = 0; e < epochs; ++e) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c.at(e);
    out[e] = sum / static_cast<double>(curves.size());
  }
  return out;
}

std::vector<double> variance_curve(
    const std::vector<std::vector<double>>& curves, std::size_t epochs) {
  std::vector<double> out(epochs, kNaN);
  if (curves.size() < 2) return out;
  for (std::size_t e = 0; e < epochs; ++e) {
    std::vector<double> values;
    for (const auto& c : curves) values.push_back(c.at(e));
    out[e] = aggregate_runs(values).variance;
  }
  return out;
}

CsvTable cells_table(const std::string& name,
                     const std::vector<CellResult>& cells) {
  CsvTable t{name,
             {"variant", "class", "seed", "status", "test_auroc", "best_epoch",
              "stop_epoch"},
             {}};
  for (const CellResult& c : cells) {
    t.rows.push_back({c.variant, std::to_string(c.normal_class),
                      std::to_string(c.seed), c.status,
                      c.ok() ? csv::number(c.test_auroc) : "",
                      std::to_string(c.history.best_epoch),
                      std::to_string(c.history.stop_epoch)});
  }
  return t;
}

std::string aggregation_name(FrameAggregation a) {
  return a == FrameAggregation::kMax ? "max" : "mean";
}

}  // namespace

// DataSource -----------------------------------------------------------------

DataSource::DataSource(DatasetConfig config) : config_(std::move(config)) {}

DataSource::DataSource(DatasetConfig config, Benchmark benchmark)
    : config_(std::move(config)), benchmark_(std::move(benchmark)) {}

void DataSource::load() {
  if (benchmark_ || test_patches_) return;
  const DatasetConfig& d = config_;
  if (d.is_video()) {
    if (d.train_frames.empty() || d.test_frames.empty() ||
        d.test_masks.empty())
      throw ConfigError(
          "dataset: ucsd needs train_frames, test_frames and test_masks");
    PatchOptions options{d.patch, kInputSide};
    std::optional<std::string> train_masks;
    if (!d.train_masks.empty()) train_masks = d.train_masks;
    train_patches_ = extract_patches(d.train_frames, train_masks, options);
    test_patches_ = extract_patches(d.test_frames, d.test_masks, options);
    return;
  }
  if (d.path.empty()) throw ConfigError("dataset.path is empty");
  if (d.name == "cifar10") {
    benchmark_ = load_cifar_benchmark(d.path);
  } else {
    benchmark_ = load_idx_benchmark(d.path, d.name);
  }
}

const ProtocolSplit& DataSource::split(int normal_class, std::uint64_t seed,
                                       const SplitOptions& options) {
  const std::string key = split_key(normal_class, seed, options);
  if (cached_ && key == cached_key_) return *cached_;
  cached_.reset();
  load();
  if (config_.is_video()) {
    cached_ = make_patch_split(*train_patches_, *test_patches_, seed, options);
  } else {
    cached_ = make_protocol_split(*benchmark_, normal_class, seed, options);
  }
  cached_key_ = key;
  return *cached_;
}

// Evaluation -----------------------------------------------------------------

double aggregate_frame(std::span<const double> patch_scores,
                       FrameAggregation aggregation) {
  if (patch_scores.empty()) throw Error("aggregate_frame: no patch scores");
  if (aggregation == FrameAggregation::kMax)
    return *std::max_element(patch_scores.begin(), patch_scores.end());
  double sum = 0.0;
  for (double s : patch_scores) sum += s;
  return sum / static_cast<double>(patch_scores.size());
}

Evaluation evaluate(const ModelParams<float>& params,
                    const ProtocolSplit& split, LossKind loss,
                    FrameAggregation aggregation) {
  if (split.test.empty()) throw DataError("evaluate: empty test set");
  if (params.channels() != split.channels())
    throw ConfigError("evaluate: checkpoint has " +
                      std::to_string(params.channels()) +
                      " channel(s) but the dataset has " +
                      std::to_string(split.channels()));
  std::vector<const Image*> images;
  images.reserve(split.test.size());
  for (const TestItem& item : split.test) images.push_back(&item.image);

  Evaluation ev;
  ev.item_scores = score_images(params, images, loss);
  if (split.group_labels.empty()) {
    ev.scored.scores = ev.item_scores;
    for (const TestItem& item : split.test) {
      ev.scored.labels.push_back(item.label);
      ev.ids.push_back(item.id);
    }
  } else {
    ev.frame_level = true;
    std::vector<std::vector<double>> groups(split.group_labels.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      const long g = split.test[i].group;
      if (g < 0 || static_cast<std::size_t>(g) >= groups.size())
        throw DataError("evaluate: test item without a valid frame index");
      groups[static_cast<std::size_t>(g)].push_back(ev.item_scores[i]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty()) continue;
      ev.scored.scores.push_back(aggregate_frame(groups[g], aggregation));
      ev.scored.labels.push_back(split.group_labels[g]);
      ev.ids.push_back(g < split.group_ids.size() ? split.group_ids[g]
                                                  : std::to_string(g));
    }
  }
  ev.scored.validate(true);
  ev.auroc = auroc(ev.scored);
  ev.roc = roc_curve(ev.scored);
  if (ev.frame_level) ev.eer = eer(ev.scored);
  return ev;
}

// Plans ----------------------------------------------------------------------

std::string_view plan_name(PlanKind kind) {
  switch (kind) {
    case PlanKind::kClassSweep: return "class-sweep";
    case PlanKind::kLossAblation: return "loss-ablation";
    case PlanKind::kLabelAblation: return "label-ablation";
    case PlanKind::kAugmentAblation: return "augment-ablation";
    case PlanKind::kIntervalSweep: return "interval-sweep";
    case PlanKind::kVideo: return "video";
  }
  return "?";
}

std::optional<PlanKind> parse_plan_kind(std::string_view name) {
  for (PlanKind k :
       {PlanKind::kClassSweep, PlanKind::kLossAblation,
        PlanKind::kLabelAblation, PlanKind::kAugmentAblation,
        PlanKind::kIntervalSweep, PlanKind::kVideo}) {
    if (plan_name(k) == name) return k;
  }
  return std::nullopt;
}

void ExperimentPlan::validate() const {
  config.validate();
  const std::string name(plan_name(kind));
  if (seeds.empty()) throw ConfigError(name + ": needs at least one run");
  if (classes.empty()) throw ConfigError(name + ": needs at least one class");
  if ((kind == PlanKind::kVideo) != config.dataset.is_video())
    throw ConfigError(name + ": the video plan and the ucsd dataset go "
                      "together");
  if (kind == PlanKind::kLabelAblation && seeds.size() < 2)
    throw ConfigError(name + ": needs at least 2 runs (experiment.runs)");
  if (kind == PlanKind::kIntervalSweep && seeds.size() < 3)
    throw ConfigError(name + ": needs at least 3 runs (experiment.runs)");
}

ExperimentPlan make_plan(PlanKind kind, const RunConfig& config,
                         std::string output_dir) {
  ExperimentPlan plan;
  plan.kind = kind;
  plan.config = config;
  plan.output_dir = std::move(output_dir);
  if (config.dataset.is_video()) {
    plan.classes = {0};
  } else if (!config.experiment.classes.empty()) {
    plan.classes = config.experiment.classes;
  } else {
    for (int c = 0; c < 10; ++c) plan.classes.push_back(c);
  }
  for (std::size_t k = 0; k < config.experiment.runs; ++k)
    plan.seeds.push_back(config.seed + k);
  plan.validate();
  return plan;
}

// Cells ----------------------------------------------------------------------

ExperimentRunner::ExperimentRunner(DataSource& data) : data_(data) {}

CellResult ExperimentRunner::run_cell(const std::string& variant,
                                      const RunConfig& config,
                                      int normal_class, std::uint64_t seed,
                                      bool curves) {
  const std::string key = dump_config(config, true) + '|' +
                          std::to_string(normal_class) + '|' +
                          std::to_string(seed) + '|' + (curves ? "c" : "-");
  if (auto it = memo_.find(key); it != memo_.end()) {
    CellResult copy = it->second;
    copy.variant = variant;
    return copy;
  }

  CellResult cell;
  cell.variant = variant;
  cell.normal_class = normal_class;
  cell.seed = seed;
  try {
    RunConfig c = config;
    c.dataset.normal_class = normal_class;
    c.train.seed = seed;
    if (curves) c.train.run_full_budget = true;
    const ProtocolSplit& split =
        data_.split(normal_class, config.seed, c.split_options());
    const FrameAggregation aggregation = c.dataset.frame_aggregation;
    EpochObserver observer;
    if (curves) {
      observer = [&](const EpochRecord&, const ModelParams<float>& params) {
        cell.test_curve.push_back(
            evaluate(params, split, c.train.loss, aggregation).auroc);
      };
    }
    TrainResult result = train(c.train, split, observer);
    const Evaluation ev =
        evaluate(result.params, split, c.train.loss, aggregation);
    cell.test_auroc = ev.auroc;
    cell.test_eer = ev.eer;
    cell.history = std::move(result.history);
  } catch (const DivergenceError& e) {
    cell.status = "diverged";
    cell.message = e.what();
  } catch (const ConfigError& e) {
    cell.status = "config";
    cell.message = e.what();
  } catch (const DataError& e) {
    cell.status = "data";
    cell.message = e.what();
  } catch (const Error& e) {
    cell.status = "error";
    cell.message = e.what();
  }
  ++trained_;
  if (progress_) {
    std::ostringstream line;
    line << variant << " class=" << normal_class << " seed=" << seed << ' '
         << cell.status;
    if (cell.ok()) line << " test_auroc=" << cell.test_auroc;
    else line << ": " << cell.message;
    progress_(line.str());
  }
  memo_.emplace(key, cell);
  return cell;
}

// Tables ---------------------------------------------------------------------

std::string table_body(const CsvTable& table) {
  std::string out;
  auto row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv::field(fields[i]);
    }
    out += '\n';
  };
  row(table.columns);
  for (const auto& r : table.rows) row(r);
  return out;
}

void write_table(std::ostream& out, const CsvTable& table,
                 const ExperimentPlan& plan) {
  out << "# plan=" << plan_name(plan.kind) << '\n';
  out << "# config_hash=" << config_hash(plan.config) << '\n';
  out << "# seeds=";
  for (std::size_t i = 0; i < plan.seeds.size(); ++i)
    out << (i ? "," : "") << plan.seeds[i];
  out << "\n# classes=";
  for (std::size_t i = 0; i < plan.classes.size(); ++i)
    out << (i ? "," : "") << plan.classes[i];
  out << "\n# config=" << dump_config(plan.config, true) << '\n';
  out << table_body(table);
}

// Reports --------------------------------------------------------------------

std::vector<LabelScheme> interval_pairs() {
  return {LabelScheme::continuous(0.1, 0.9), LabelScheme::continuous(0.2, 0.8),
          LabelScheme::continuous(0.3, 0.7)};
}

std::string interval_label(const LabelScheme& s) {
  return "[0, " + csv::number(s.normal_upper) + "] - [" +
         csv::number(s.anomaly_lower) + ", 1]";
}

ClassSweepReport run_class_sweep(const ExperimentPlan& plan,
                                 ExperimentRunner& runner) {
  plan.validate();
  ClassSweepReport report;
  report.classes = plan.classes;
  const Grid grid(plan, runner, "default", plan.config, false, report.cells);

  std::vector<double> class_means;
  for (std::size_t c = 0; c < grid.classes(); ++c) {
    report.per_class.push_back(grid.class_test_auroc(c));
    report.ok_runs.push_back(report.per_class.back().values.size());
    if (!report.per_class.back().values.empty())
      class_means.push_back(report.per_class.back().mean);
  }
  report.mean = mean_of(class_means);

  CsvTable table{"class_sweep", {"row"}, {}};
  for (int c : plan.classes) table.columns.push_back(std::to_string(c));
  table.columns.push_back("mean");
  std::vector<std::string> means{"auroc_percent"};
  for (const RunAggregate& a : report.per_class) means.push_back(percent(a.mean));
  means.push_back(percent(report.mean));
  table.rows.push_back(means);
  if (plan.seeds.size() >= 2) {
    std::vector<std::string> variances{"variance"};
    for (const RunAggregate& a : report.per_class)
      variances.push_back(csv::number(a.variance));
    variances.push_back("");
    table.rows.push_back(variances);
  }
  report.tables.push_back(std::move(table));
  report.tables.push_back(cells_table("class_sweep_cells", report.cells));
  return report;
}

LossAblationReport run_loss_ablation(const ExperimentPlan& plan,
                                     ExperimentRunner& runner) {
  plan.validate();
  LossAblationReport report;
  RunConfig mse = plan.config;
  mse.train.loss = LossKind::kMse;
  RunConfig bce = plan.config;
  bce.train.loss = LossKind::kBce;
  const Grid g_mse(plan, runner, "mse", mse, true, report.cells);
  const Grid g_bce(plan, runner, "bce", bce, true, report.cells);

  const std::size_t epochs = plan.config.train.epochs;
  for (std::size_t e = 1; e <= epochs; ++e) report.epochs.push_back(e);
  report.mse_val = mean_curve(seed_curves(g_mse, false), epochs);
  report.mse_test = mean_curve(seed_curves(g_mse, true), epochs);
  report.bce_val = mean_curve(seed_curves(g_bce, false), epochs);
  report.bce_test = mean_curve(seed_curves(g_bce, true), epochs);

  auto first_hit = [](const std::optional<std::vector<double>>& curve)
      -> std::optional<std::size_t> {
    if (!curve) return std::nullopt;
    for (std::size_t e = 0; e < curve->size(); ++e) {
      if ((*curve)[e] >= kCurveTarget) return e + 1;
    }
    return std::nullopt;
  };
  CsvTable targets{"loss_epochs_to_target",
                   {"seed", "mse_epochs", "bce_epochs", "mse_not_slower"},
                   {}};
  for (std::size_t s = 0; s < plan.seeds.size(); ++s) {
    const auto m = first_hit(g_mse.seed_curve(s, false));
    const auto b = first_hit(g_bce.seed_curve(s, false));
    report.mse_epochs_to_target.push_back(m);
    report.bce_epochs_to_target.push_back(b);
    const std::size_t never = epochs + 1;
    const bool not_slower = m.value_or(never) <= b.value_or(never);
    if (not_slower) ++report.seeds_mse_not_slower;
    auto cell = [](std::optional<std::size_t> v) {
      return v ? std::to_string(*v) : std::string("never");
    };
    targets.rows.push_back({std::to_string(plan.seeds[s]), cell(m), cell(b),
                            not_slower ? "1" : "0"});
  }

  CsvTable curves{"loss_curves",
                  {"epoch", "mse_val_auroc", "mse_test_auroc", "bce_val_auroc",
                   "bce_test_auroc"},
                  {}};
  for (std::size_t e = 0; e < epochs; ++e) {
    curves.rows.push_back(
        {std::to_string(e + 1), csv::number(report.mse_val[e]),
         csv::number(report.mse_test[e]), csv::number(report.bce_val[e]),
         csv::number(report.bce_test[e])});
  }
  report.tables.push_back(std::move(curves));
  report.tables.push_back(std::move(targets));
  report.tables.push_back(cells_table("loss_ablation_cells", report.cells));
  return report;
}

LabelAblationReport run_label_ablation(const ExperimentPlan& plan,
                                       ExperimentRunner& runner) {
  plan.validate();
  LabelAblationReport report;
  RunConfig cl = plan.config;
  if (cl.train.labels.mode != LabelMode::kContinuous)
    cl.train.labels = LabelScheme{};
  RunConfig dl = plan.config;
  dl.train.labels = LabelScheme::discrete();
  const Grid g_cl(plan, runner, "cl", cl, true, report.cells);
  const Grid g_dl(plan, runner, "dl", dl, true, report.cells);

  const std::size_t epochs = plan.config.train.epochs;
  for (std::size_t e = 1; e <= epochs; ++e) report.epochs.push_back(e);
  report.cl_val_variance = variance_curve(seed_curves(g_cl, false), epochs);
  report.dl_val_variance = variance_curve(seed_curves(g_dl, false), epochs);
  report.classes = plan.classes;
  for (std::size_t c = 0; c < plan.classes.size(); ++c) {
    report.cl_test.push_back(g_cl.class_test_auroc(c));
    report.dl_test.push_back(g_dl.class_test_auroc(c));
  }

  CsvTable variance{"label_val_variance",
                    {"epoch", "cl_val_variance", "dl_val_variance"},
                    {}};
  for (std::size_t e = 0; e < epochs; ++e) {
    variance.rows.push_back({std::to_string(e + 1),
                             csv::number(report.cl_val_variance[e]),
                             csv::number(report.dl_val_variance[e])});
  }
  CsvTable test{"label_test_variance",
                {"class", "cl_test_mean", "cl_test_variance", "dl_test_mean",
                 "dl_test_variance"},
                {}};
  for (std::size_t c = 0; c < plan.classes.size(); ++c) {
    test.rows.push_back({std::to_string(plan.classes[c]),
                         csv::number(report.cl_test[c].mean),
                         csv::number(report.cl_test[c].variance),
                         csv::number(report.dl_test[c].mean),
                         csv::number(report.dl_test[c].variance)});
  }
  report.tables.push_back(std::move(variance));
  report.tables.push_back(std::move(test));
  report.tables.push_back(cells_table("label_ablation_cells", report.cells));
  return report;
}

AugmentAblationReport run_augment_ablation(const ExperimentPlan& plan,
                                           ExperimentRunner& runner) {
  plan.validate();
  AugmentAblationReport report;
  CsvTable table{"augment_ablation",
                 {"augmentations", "reference", "mean_auroc_percent",
                  "variance"},
                 {}};
  auto add_row = [&](const std::string& label, bool reference,
                     std::vector<AugmentKind> kinds) {
    RunConfig c = plan.config;
    c.train.augment.enabled = std::move(kinds);
    const Grid grid(plan, runner, label, c, true, report.cells);
    report.rows.push_back({label, reference, grid.test_auroc()});
    const RunAggregate& a = report.rows.back().test_auroc;
    table.rows.push_back({label, reference ? "1" : "0", percent(a.mean),
                          csv::number(a.variance)});
  };
  for (AugmentKind k : kAllAugmentKinds)
    add_row(std::string(augment_name(k)), false, {k});
  add_row("all", true, {kAllAugmentKinds.begin(), kAllAugmentKinds.end()});
  report.tables.push_back(std::move(table));
  report.tables.push_back(cells_table("augment_ablation_cells", report.cells));
  return report;
}

IntervalSweepReport run_interval_sweep(const ExperimentPlan& plan,
                                       ExperimentRunner& runner) {
  plan.validate();
  IntervalSweepReport report;
  CsvTable table{"interval_sweep",
                 {"interval", "mean_auroc_percent", "variance"},
                 {}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const LabelScheme& scheme : interval_pairs()) {
    RunConfig c = plan.config;
    c.train.labels = scheme;
    const std::string label = interval_label(scheme);
    const Grid grid(plan, runner, label, c, true, report.cells);
    report.rows.push_back({label, scheme, grid.test_auroc()});
    const RunAggregate& a = report.rows.back().test_auroc;
    table.rows.push_back({label, percent(a.mean), csv::number(a.variance)});
    lo = std::min(lo, a.mean);
    hi = std::max(hi, a.mean);
  }
  report.spread_points = (hi - lo) * 100.0;
  report.tables.push_back(std::move(table));
  report.tables.push_back(cells_table("interval_sweep_cells", report.cells));
  return report;
}

VideoReport run_video(const ExperimentPlan& plan, ExperimentRunner& runner) {
  plan.validate();
  VideoReport report;
  const Grid grid(plan, runner, "video", plan.config, false, report.cells);
  CsvTable table{"video", {"seed", "status", "auroc", "eer"}, {}};
  std::vector<double> aurocs, eers;
  for (std::size_t s = 0; s < grid.seeds(); ++s) {
    const CellResult& cell = grid.at(0, s);
    if (cell.ok()) {
      aurocs.push_back(cell.test_auroc);
      eers.push_back(cell.test_eer.value_or(kNaN));
    }
    table.rows.push_back({std::to_string(cell.seed), cell.status,
                          cell.ok() ? csv::number(cell.test_auroc) : "",
                          cell.ok() ? csv::number(cell.test_eer.value_or(kNaN))
                                    : ""});
  }
  report.auroc = summarize(aurocs);
  report.eer = summarize(eers);
  table.rows.push_back({"mean", aggregation_name(
                                    plan.config.dataset.frame_aggregation),
                        csv::number(report.auroc.mean),
                        csv::number(report.eer.mean)});
  report.tables.push_back(std::move(table));
  return report;
}

PlanOutput run_plan(const ExperimentPlan& plan, ExperimentRunner& runner) {
  auto pack = [](auto report) {
    return PlanOutput{std::move(report.tables), std::move(report.cells)};
  };
  switch (plan.kind) {
    case PlanKind::kClassSweep: return pack(run_class_sweep(plan, runner));
    case PlanKind::kLossAblation: return pack(run_loss_ablation(plan, runner));
    case PlanKind::kLabelAblation:
      return pack(run_label_ablation(plan, runner));
    case PlanKind::kAugmentAblation:
      return pack(run_augment_ablation(plan, runner));
    case PlanKind::kIntervalSweep:
      return pack(run_interval_sweep(plan, runner));
    case PlanKind::kVideo: return pack(run_video(plan, runner));
  }
  throw ConfigError("unknown plan kind");
}

std::string manifest_json(const ExperimentPlan& plan,
                          const std::vector<CellResult>& cells) {
  using nlohmann::ordered_json;
  ordered_json m;
  m["plan"] = std::string(plan_name(plan.kind));
  m["config_hash"] = config_hash(plan.config);
  m["seeds"] = plan.seeds;
  m["classes"] = plan.classes;
  m["config"] = ordered_json::parse(dump_config(plan.config, true));
  ordered_json list = ordered_json::array();
  for (const CellResult& c : cells) {
    ordered_json cell;
    cell["variant"] = c.variant;
    cell["class"] = c.normal_class;
    cell["seed"] = c.seed;
    cell["status"] = c.status;
    if (!c.ok()) cell["message"] = c.message;
    if (c.ok()) cell["test_auroc"] = c.test_auroc;
    if (c.test_eer) cell["test_eer"] = *c.test_eer;
    cell["best_epoch"] = c.history.best_epoch;
    cell["stop_epoch"] = c.history.stop_epoch;
    list.push_back(cell);
  }
  m["cells"] = list;
  return m.dump(2) + "\n";
}

}  // namespace adacl
