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

#include <fstream>

#include "adacl/config.hpp"
#include "adacl/error.hpp"
#include "support/fixtures.hpp"

namespace adacl {
namespace {

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.dataset.name, "mnist");
  EXPECT_EQ(c.dataset.validation_size, 150u);
  EXPECT_EQ(c.train.epochs, 10u);
  EXPECT_EQ(c.train.batch_size, 64u);
  EXPECT_EQ(c.train.loss, LossKind::kMse);
  EXPECT_EQ(c.train.optimizer, OptimizerKind::kAdam);
  EXPECT_DOUBLE_EQ(c.train.lr_base, 1e-4);
  EXPECT_DOUBLE_EQ(c.train.lr_max, 1e-3);
  EXPECT_EQ(c.train.cycle_epochs, 2u);
  EXPECT_EQ(c.train.patience, 3u);
  EXPECT_EQ(c.train.labels.mode, LabelMode::kContinuous);
  EXPECT_DOUBLE_EQ(c.train.labels.normal_upper, 0.3);
  EXPECT_DOUBLE_EQ(c.train.labels.anomaly_lower, 0.7);
  EXPECT_EQ(c.train.augment.enabled.size(), 4u);
  EXPECT_EQ(c.experiment.runs, 1u);
}

TEST(Config, EpochDefaultDependsOnDataset) {
  EXPECT_EQ(parse_config(R"({"dataset":{"name":"cifar10"}})").train.epochs,
            15u);
  EXPECT_EQ(parse_config(R"({"dataset":{"name":"fmnist"}})").train.epochs,
            10u);
  EXPECT_EQ(parse_config(R"({"dataset":{"name":"cifar10"},
                             "optimizer":{"epochs":4}})")
                .train.epochs,
            4u);
}

TEST(Config, ReadsEverySection) {
  const RunConfig c = parse_config(R"({
    "seed": 17,
    "dataset": {"name": "fmnist", "path": "/d", "normal_class": 3,
                "validation_size": 20, "train_limit": 100, "test_limit": 50},
    "model": {"loss": "bce"},
    "labels": {"mode": "discrete", "normal_upper": 0.2, "anomaly_lower": 0.8},
    "augment": {"kinds": ["rotate", "mixup"], "patch_fraction": [0.3, 0.4],
                "mixup_alpha": [0.45, 0.55]},
    "optimizer": {"kind": "amsgrad", "lr_base": 0.0002, "lr_max": 0.002,
                  "cycle_epochs": 3, "epochs": 6, "batch_size": 32,
                  "patience": 2, "run_full_budget": true},
    "experiment": {"classes": [1, 2], "runs": 5}
  })");
  EXPECT_EQ(c.seed, 17u);
  EXPECT_EQ(c.train.seed, 17u);
  EXPECT_EQ(c.dataset.name, "fmnist");
  EXPECT_EQ(c.dataset.path, "/d");
  EXPECT_EQ(c.dataset.normal_class, 3);
  EXPECT_EQ(c.train.loss, LossKind::kBce);
  EXPECT_EQ(c.train.labels.mode, LabelMode::kDiscrete);
  EXPECT_DOUBLE_EQ(c.train.labels.normal_upper, 0.2);
  EXPECT_EQ(c.train.augment.enabled,
            (std::vector<AugmentKind>{AugmentKind::kRotate, AugmentKind::kMixup}));
  EXPECT_DOUBLE_EQ(c.train.augment.patch_fraction.lo, 0.3);
  EXPECT_DOUBLE_EQ(c.train.augment.mixup_alpha.hi, 0.55);
  EXPECT_EQ(c.train.optimizer, OptimizerKind::kAmsgrad);
  EXPECT_EQ(c.train.cycle_epochs, 3u);
  EXPECT_EQ(c.train.epochs, 6u);
  EXPECT_EQ(c.train.batch_size, 32u);
  EXPECT_EQ(c.train.patience, 2u);
  EXPECT_TRUE(c.train.run_full_budget);
  EXPECT_EQ(c.experiment.classes, (std::vector<int>{1, 2}));
  EXPECT_EQ(c.experiment.runs, 5u);

  const SplitOptions s = c.split_options();
  EXPECT_EQ(s.validation_size, 20u);
  EXPECT_EQ(s.train_limit, 100u);
  EXPECT_EQ(s.test_limit, 50u);
  EXPECT_EQ(s.augment.enabled, c.train.augment.enabled);
}

TEST(Config, UnknownKeysNameTheirPath) {
  EXPECT_NE(config_error(R"({"sed": 1})").find("sed: unknown key"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"dataset": {"nme": "mnist"}})")
                .find("dataset.nme: unknown key"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"optimizer": {"momentum": 0.9}})")
                .find("optimizer.momentum"),
            std::string::npos);
}

TEST(Config, RejectsBadValues) {
  const char* bad[] = {
      "[1, 2]",
      "{not json",
      R"({"seed": "one"})",
      R"({"seed": -1})",
      R"({"dataset": {"name": "imagenet"}})",
      R"({"dataset": {"normal_class": 10}})",
      R"({"dataset": {"validation_size": 0}})",
      R"({"dataset": {"train_limit": -5}})",
      R"({"dataset": "mnist"})",
      R"({"model": {"loss": "hinge"}})",
      R"({"labels": {"mode": "fuzzy"}})",
      R"({"labels": {"normal_upper": 0.8}})",
      R"({"augment": {"kinds": []}})",
      R"({"augment": {"kinds": ["flip"]}})",
      R"({"augment": {"kinds": ["rotate", "rotate"]}})",
      R"({"augment": {"patch_fraction": [0.5]}})",
      R"({"optimizer": {"kind": "sgd"}})",
      R"({"optimizer": {"batch_size": 7}})",
      R"({"optimizer": {"lr_base": 0.01}})",
      R"({"optimizer": {"epochs": 0}})",
      R"({"optimizer": {"run_full_budget": "yes"}})",
      R"({"experiment": {"classes": [11]}})",
      R"({"experiment": {"runs": 0}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse_config(text), ConfigError) << text;
  }
}

TEST(Config, DumpParsesBackToTheSameConfig) {
  const RunConfig c = parse_config(R"({
    "seed": 4, "dataset": {"name": "cifar10", "normal_class": 7},
    "model": {"loss": "bce"}, "augment": {"kinds": ["puzzle"]},
    "experiment": {"classes": [7], "runs": 3}})");
  const std::string pretty = dump_config(c);
  const std::string compact = dump_config(c, true);
  EXPECT_EQ(compact.find('\n'), std::string::npos);
  EXPECT_EQ(dump_config(parse_config(pretty), true), compact);
  EXPECT_EQ(dump_config(parse_config(compact)), pretty);
  EXPECT_EQ(config_hash(parse_config(pretty)), config_hash(c));
}

TEST(Config, HashIsStableAndSensitive) {
  const RunConfig a = parse_config("{}");
  const std::string h = config_hash(a);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(config_hash(parse_config("{}")), h);
  EXPECT_NE(config_hash(parse_config(R"({"seed": 1})")), h);
  EXPECT_NE(config_hash(parse_config(R"({"optimizer": {"lr_max": 0.002}})")),
            h);
}

TEST(Config, LoadFromFile) {
  testing::TempDir dir("config");
  const std::string path = dir.file("c.json");
  std::ofstream(path) << R"({"seed": 8, "dataset": {"normal_class": 2}})";
  const RunConfig c = load_config(path);
  EXPECT_EQ(c.seed, 8u);
  EXPECT_EQ(c.dataset.normal_class, 2);
  EXPECT_THROW(load_config(dir.file("missing.json")), ConfigError);
}

}  // namespace
}  // namespace adacl
