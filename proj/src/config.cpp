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

#include "adacl/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>

#include "adacl/error.hpp"
#include "json.hpp"

namespace adacl {
namespace {

using json = nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    const json& v = node_.at(key);
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      const bool ok = std::is_unsigned_v<T> ? v.is_number_unsigned()
                                            : v.is_number_integer();
      if (!ok) {
        throw ConfigError(where(key) + (std::is_unsigned_v<T>
                                            ? ": expected a non-negative integer"
                                            : ": expected an integer"));
      }
    }
    try {
      out = v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + ": wrong type");
    }
  }

  void read_size(const std::string& key, std::size_t& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    const json& v = node_.at(key);
    if (!v.is_number_unsigned())
      throw ConfigError(where(key) + ": expected a non-negative integer");
    out = v.get<std::size_t>();
  }

  void read_interval(const std::string& key, Interval& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    const json& v = node_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
      throw ConfigError(where(key) + ": expected [lo, hi]");
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_.contains(key) ? node_.at(key) : empty(), where(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  static const json& empty() {
    static const json kEmpty = json::object();
    return kEmpty;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::set<std::string>& dataset_names() {
  static const std::set<std::string> kNames{"mnist", "fmnist", "cifar10",
                                            "ucsd"};
  return kNames;
}

LossKind parse_loss(const std::string& text) {
  if (text == "mse") return LossKind::kMse;
  if (text == "bce") return LossKind::kBce;
  throw ConfigError("model.loss: expected mse or bce, got '" + text + "'");
}

OptimizerKind parse_optimizer(const std::string& text) {
  if (text == "adam") return OptimizerKind::kAdam;
  if (text == "amsgrad") return OptimizerKind::kAmsgrad;
  throw ConfigError("optimizer.kind: expected adam or amsgrad, got '" + text +
                    "'");
}

LabelMode parse_label_mode(const std::string& text) {
  if (text == "continuous") return LabelMode::kContinuous;
  if (text == "discrete") return LabelMode::kDiscrete;
  throw ConfigError("labels.mode: expected continuous or discrete, got '" +
                    text + "'");
}

FrameAggregation parse_aggregation(const std::string& text) {
  if (text == "max") return FrameAggregation::kMax;
  if (text == "mean") return FrameAggregation::kMean;
  throw ConfigError("dataset.frame_aggregation: expected max or mean, got '" +
                    text + "'");
}

json to_json(const RunConfig& c) {
  const DatasetConfig& d = c.dataset;
  const TrainConfig& t = c.train;
  json kinds = json::array();
  for (AugmentKind k : t.augment.enabled) kinds.push_back(augment_name(k));
  json j;
  j["seed"] = c.seed;
  j["dataset"] = {
      {"name", d.name},
      {"path", d.path},
      {"normal_class", d.normal_class},
      {"validation_size", d.validation_size},
      {"train_limit", d.train_limit},
      {"test_limit", d.test_limit},
      {"train_frames", d.train_frames},
      {"train_masks", d.train_masks},
      {"test_frames", d.test_frames},
      {"test_masks", d.test_masks},
      {"patch", d.patch},
      {"frame_aggregation",
       d.frame_aggregation == FrameAggregation::kMax ? "max" : "mean"}};
  j["model"] = {{"loss", loss_name(t.loss)}};
  j["labels"] = {{"mode", label_mode_name(t.labels.mode)},
                 {"normal_upper", t.labels.normal_upper},
                 {"anomaly_lower", t.labels.anomaly_lower}};
  j["augment"] = {
      {"kinds", kinds},
      {"patch_fraction",
       {t.augment.patch_fraction.lo, t.augment.patch_fraction.hi}},
      {"mixup_alpha", {t.augment.mixup_alpha.lo, t.augment.mixup_alpha.hi}}};
  j["optimizer"] = {{"kind", optimizer_name(t.optimizer)},
                    {"lr_base", t.lr_base},
                    {"lr_max", t.lr_max},
                    {"cycle_epochs", t.cycle_epochs},
                    {"epochs", t.epochs},
                    {"batch_size", t.batch_size},
                    {"patience", t.patience},
                    {"run_full_budget", t.run_full_budget}};
  j["experiment"] = {{"classes", c.experiment.classes},
                     {"runs", c.experiment.runs}};
  return j;
}

}  // namespace

SplitOptions RunConfig::split_options() const {
  SplitOptions options;
  options.validation_size = dataset.validation_size;
  options.train_limit = dataset.train_limit;
  options.test_limit = dataset.test_limit;
  options.augment = train.augment;
  return options;
}

void RunConfig::validate() const {
  if (!dataset_names().count(dataset.name))
    throw ConfigError("dataset.name: expected mnist, fmnist, cifar10 or ucsd, "
                      "got '" + dataset.name + "'");
  if (!dataset.is_video() &&
      (dataset.normal_class < 0 || dataset.normal_class > 9))
    throw ConfigError("dataset.normal_class: expected 0..9");
  for (int cls : experiment.classes) {
    if (cls < 0 || cls > 9)
      throw ConfigError("experiment.classes: expected values in 0..9");
  }
  if (dataset.validation_size < 1)
    throw ConfigError("dataset.validation_size: must be >= 1");
  if (dataset.patch < 2) throw ConfigError("dataset.patch: must be >= 2");
  if (experiment.runs < 1) throw ConfigError("experiment.runs: must be >= 1");
  train.validate();
}

std::size_t default_epochs(std::string_view dataset) {
  return dataset == "cifar10" ? 15 : 10;
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");
  top.read("seed", c.seed);

  Section ds = top.child("dataset");
  DatasetConfig& d = c.dataset;
  ds.read("name", d.name);
  ds.read("path", d.path);
  ds.read("normal_class", d.normal_class);
  ds.read_size("validation_size", d.validation_size);
  ds.read_size("train_limit", d.train_limit);
  ds.read_size("test_limit", d.test_limit);
  ds.read("train_frames", d.train_frames);
  ds.read("train_masks", d.train_masks);
  ds.read("test_frames", d.test_frames);
  ds.read("test_masks", d.test_masks);
  ds.read_size("patch", d.patch);
  std::string aggregation = "max";
  ds.read("frame_aggregation", aggregation);
  d.frame_aggregation = parse_aggregation(aggregation);
  ds.finish();

  TrainConfig& t = c.train;
  Section model = top.child("model");
  std::string loss = "mse";
  model.read("loss", loss);
  t.loss = parse_loss(loss);
  model.finish();

  Section labels = top.child("labels");
  std::string mode = "continuous";
  labels.read("mode", mode);
  t.labels.mode = parse_label_mode(mode);
  labels.read("normal_upper", t.labels.normal_upper);
  labels.read("anomaly_lower", t.labels.anomaly_lower);
  labels.finish();

  Section aug = top.child("augment");
  if (aug.has("kinds")) {
    std::vector<std::string> names;
    aug.read("kinds", names);
    t.augment.enabled.clear();
    for (const std::string& name : names) {
      auto kind = parse_augment_kind(name);
      if (!kind) throw ConfigError("augment.kinds: unknown kind '" + name + "'");
      t.augment.enabled.push_back(*kind);
    }
  }
  aug.read_interval("patch_fraction", t.augment.patch_fraction);
  aug.read_interval("mixup_alpha", t.augment.mixup_alpha);
  aug.finish();

  Section opt = top.child("optimizer");
  std::string kind = "adam";
  opt.read("kind", kind);
  t.optimizer = parse_optimizer(kind);
  opt.read("lr_base", t.lr_base);
  opt.read("lr_max", t.lr_max);
  opt.read_size("cycle_epochs", t.cycle_epochs);
  t.epochs = default_epochs(d.name);
  opt.read_size("epochs", t.epochs);
  opt.read_size("batch_size", t.batch_size);
  opt.read_size("patience", t.patience);
  opt.read("run_full_budget", t.run_full_budget);
  opt.finish();

  Section exp = top.child("experiment");
  exp.read("classes", c.experiment.classes);
  exp.read_size("runs", c.experiment.runs);
  exp.finish();

  top.finish();
  t.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const RunConfig& config, bool compact) {
  return to_json(config).dump(compact ? -1 : 2);
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(config, true)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace adacl
