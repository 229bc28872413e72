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

#include <cmath>
#include <limits>
#include <sstream>

#include "adacl/error.hpp"
#include "adacl/training.hpp"
#include "support/fixtures.hpp"

namespace adacl {
namespace {

TEST(CyclicLr, TriangleEndpointsAndMidpoints) {
  const CyclicSchedule s{1e-4, 1e-3, 4};
  EXPECT_NEAR(cyclic_lr(0, s), 1e-4, 1e-15);
  EXPECT_NEAR(cyclic_lr(1, s), 5.5e-4, 1e-15);
  EXPECT_NEAR(cyclic_lr(2, s), 1e-3, 1e-15);
  EXPECT_NEAR(cyclic_lr(3, s), 5.5e-4, 1e-15);
  EXPECT_NEAR(cyclic_lr(4, s), 1e-4, 1e-15);
  EXPECT_NEAR(cyclic_lr(6, s), 1e-3, 1e-15);
}

TEST(CyclicLr, StaysInsideBounds) {
  const CyclicSchedule s{2e-4, 3e-3, 38};
  for (std::size_t step = 0; step < 500; ++step) {
    const double lr = cyclic_lr(step, s);
    ASSERT_GE(lr, 2e-4 - 1e-15);
    ASSERT_LE(lr, 3e-3 + 1e-15);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<Tensor<double>> params{Tensor<double>({3})};
  params[0][0] = 1.0;
  params[0][1] = -2.0;
  params[0][2] = 0.5;
  std::vector<Tensor<double>> grads{Tensor<double>({3})};
  grads[0][0] = 3.0;
  grads[0][1] = -0.01;
  grads[0][2] = 0.0;
  AdamState<double> state;
  adam_step(params, grads, state, 1e-3);
  // Bias correction makes the first step lr * g / (|g| + eps').
  EXPECT_NEAR(params[0][0], 1.0 - 1e-3, 1e-9);
  EXPECT_NEAR(params[0][1], -2.0 + 1e-3, 1e-8);
  EXPECT_EQ(params[0][2], 0.5);
  EXPECT_EQ(state.steps, 1u);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  std::vector<Tensor<float>> params{Tensor<float>({2, 2})};
  params[0].fill(0.25f);
  const auto before = params;
  std::vector<Tensor<float>> grads{Tensor<float>({2, 2})};
  AdamState<float> state;
  for (int i = 0; i < 5; ++i) adam_step(params, grads, state, 1e-2);
  EXPECT_EQ(params, before);
}

TEST(Adam, AmsgradSecondMomentNeverDecreases) {
  std::vector<Tensor<double>> params{Tensor<double>({1})};
  std::vector<Tensor<double>> grads{Tensor<double>({1})};
  AdamState<double> state;
  const AdamOptions opts{.amsgrad = true};
  const double sequence[] = {5.0, 0.1, 0.1, 0.1, 2.0, 0.0, 0.0};
  double previous = 0.0;
  for (double g : sequence) {
    grads[0][0] = g;
    adam_step(params, grads, state, 1e-3, opts);
    const double v_max = state.max_second_moment[0][0];
    EXPECT_GE(v_max, previous);
    EXPECT_GE(v_max, state.second_moment[0][0]);
    previous = v_max;
  }
}

TEST(Adam, ShapeMismatchThrows) {
  std::vector<Tensor<float>> params{Tensor<float>({2})};
  std::vector<Tensor<float>> grads{Tensor<float>({3})};
  AdamState<float> state;
  EXPECT_THROW(adam_step(params, grads, state, 1e-3), ShapeError);
  grads.clear();
  EXPECT_THROW(adam_step(params, grads, state, 1e-3), ShapeError);
}

EpochRecord record(std::size_t epoch, double auroc, double loss = 0.1) {
  EpochRecord r;
  r.epoch = epoch;
  r.val_auroc = auroc;
  r.val_loss = loss;
  return r;
}

TEST(EarlyStopping, StopsAfterPatienceEpochsWithoutImprovement) {
  EarlyStopping stop(3);
  const double aurocs[] = {0.8, 0.9, 0.85, 0.85, 0.84, 0.83};
  std::vector<bool> best;
  for (std::size_t e = 0; e < 6; ++e)
    best.push_back(stop.update(record(e + 1, aurocs[e])));
  EXPECT_EQ(best, (std::vector<bool>{true, true, false, false, false, false}));
  EXPECT_TRUE(stop.stopped());
  EXPECT_EQ(stop.best_epoch(), 2u);
  EXPECT_EQ(stop.stop_epoch(), 5u);
}

TEST(EarlyStopping, EqualAurocFallsBackToLowerLoss) {
  EarlyStopping stop(2);
  EXPECT_TRUE(stop.update(record(1, 0.9, 0.2)));
  EXPECT_TRUE(stop.update(record(2, 0.9, 0.1)));
  EXPECT_FALSE(stop.update(record(3, 0.9, 0.1)));
  EXPECT_FALSE(stop.update(record(4, 0.9, 0.3)));
  EXPECT_EQ(stop.best_epoch(), 2u);
  EXPECT_EQ(stop.stop_epoch(), 4u);
}

TEST(EarlyStopping, LaterEpochsStillCompeteAfterStopping) {
  EarlyStopping stop(1);
  EXPECT_TRUE(stop.update(record(1, 0.9)));
  EXPECT_FALSE(stop.update(record(2, 0.8)));
  EXPECT_TRUE(stop.stopped());
  EXPECT_TRUE(stop.update(record(3, 0.95)));
  EXPECT_FALSE(stop.update(record(4, 0.7)));
  EXPECT_EQ(stop.best_epoch(), 3u);
  EXPECT_EQ(stop.stop_epoch(), 2u);
}

TEST(EarlyStopping, ZeroPatienceRejected) {
  EXPECT_THROW(EarlyStopping(0), ConfigError);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 63;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lr_base = 1e-3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.cycle_epochs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.patience = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.labels.anomaly_lower = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(History, CsvHeaderAndRows) {
  TrainHistory h;
  h.epochs.push_back(record(1, 0.75));
  h.epochs.back().train_loss = 0.5;
  h.epochs.back().lr_end = 1e-3;
  std::ostringstream out;
  write_history_csv(out, h);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "epoch,train_loss,val_auroc,lr_at_epoch_end");
  EXPECT_NE(text.find("\n1,0.5,0.75,"), std::string::npos);
}

ProtocolSplit tiny_split(std::size_t per_class = 40) {
  const Benchmark bench = testing::synthetic_benchmark({0, 1, 2}, per_class, 10);
  SplitOptions opts;
  opts.validation_size = 12;
  return make_protocol_split(bench, 0, 5, opts);
}

TrainConfig tiny_config() {
  TrainConfig c;
  c.epochs = 3;
  c.batch_size = 16;
  c.seed = 9;
  return c;
}

TEST(Train, DeterministicForFixedSeed) {
  const ProtocolSplit split = tiny_split();
  const TrainConfig c = tiny_config();
  const TrainResult a = train(c, split);
  const TrainResult b = train(c, split);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.history.epochs.size(), b.history.epochs.size());
  for (std::size_t i = 0; i < a.history.epochs.size(); ++i) {
    EXPECT_EQ(a.history.epochs[i].train_loss, b.history.epochs[i].train_loss);
    EXPECT_EQ(a.history.epochs[i].val_auroc, b.history.epochs[i].val_auroc);
  }
  EXPECT_EQ(a.history.lr_trace, b.history.lr_trace);

  TrainConfig other = c;
  other.seed = 10;
  EXPECT_FALSE(train(other, split).params == a.params);
}

TEST(Train, ScheduleFollowsEpochSteps) {
  const ProtocolSplit split = tiny_split();
  const TrainConfig c = tiny_config();
  const TrainResult r = train(c, split);
  const std::size_t n = split.train.size();
  EXPECT_EQ(r.history.steps_per_epoch, (n + 7) / 8);
  EXPECT_EQ(r.history.lr_trace.size(),
            r.history.steps_per_epoch * r.history.epochs.size());
  EXPECT_DOUBLE_EQ(r.history.lr_trace.front(), c.lr_base);
  const CyclicSchedule s{c.lr_base, c.lr_max,
                         c.cycle_epochs * r.history.steps_per_epoch};
  for (std::size_t i = 0; i < r.history.lr_trace.size(); ++i)
    EXPECT_DOUBLE_EQ(r.history.lr_trace[i], cyclic_lr(i, s));
}

TEST(Train, ReturnsBestCheckpointAndRunsFullBudget) {
  const ProtocolSplit split = tiny_split();
  TrainConfig c = tiny_config();
  c.epochs = 5;
  c.patience = 1;
  c.run_full_budget = true;
  std::vector<ModelParams<float>> snapshots;
  std::vector<EpochRecord> seen;
  const TrainResult r =
      train(c, split, [&](const EpochRecord& rec, const ModelParams<float>& p) {
        seen.push_back(rec);
        snapshots.push_back(p);
      });
  ASSERT_EQ(seen.size(), 5u);
  ASSERT_EQ(r.history.epochs.size(), 5u);
  ASSERT_GE(r.history.best_epoch, 1u);
  EXPECT_EQ(r.params, snapshots[r.history.best_epoch - 1]);
  double max_auroc = 0.0;
  for (const EpochRecord& rec : seen) max_auroc = std::max(max_auroc, rec.val_auroc);
  EXPECT_EQ(seen[r.history.best_epoch - 1].val_auroc, max_auroc);

  EarlyStopping replay(c.patience);
  for (const EpochRecord& rec : seen) replay.update(rec);
  EXPECT_EQ(replay.best_epoch(), r.history.best_epoch);
  if (replay.stopped()) {
    EXPECT_EQ(r.history.stop_reason, "patience");
    EXPECT_EQ(r.history.stop_epoch, replay.stop_epoch());
  } else {
    EXPECT_EQ(r.history.stop_reason, "epoch_budget");
    EXPECT_EQ(r.history.stop_epoch, 5u);
  }
}

TEST(Train, ValidationAurocInRangeAndScoresBounded) {
  const ProtocolSplit split = tiny_split();
  const TrainResult r = train(tiny_config(), split);
  for (const EpochRecord& rec : r.history.epochs) {
    EXPECT_GE(rec.val_auroc, 0.0);
    EXPECT_LE(rec.val_auroc, 1.0);
    EXPECT_TRUE(std::isfinite(rec.train_loss));
  }
  for (LossKind loss : {LossKind::kMse, LossKind::kBce}) {
    for (double s : score_images(r.params, split.validation.images, loss)) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

// Loss of the untrained model on the exact samples and targets of epoch 1.
double untrained_first_epoch_loss(const TrainConfig& c,
                                  const ProtocolSplit& split) {
  const RngStream root(c.seed);
  RngStream init = root.derive("init");
  const ModelParams<float> params = build_model<float>(split.channels(), init);
  std::vector<Image> images;
  std::vector<double> targets;
  for (std::size_t idx = 0; idx < split.train.size(); ++idx) {
    RngStream aug = root.derive("anomaly", 1, idx);
    RngStream label = root.derive("label", 1, idx);
    images.push_back(split.train[idx]);
    targets.push_back(sample_label(SampleClass::kNormal, c.labels, label));
    images.push_back(create_anomaly(split.train[idx], c.augment, aug).image);
    targets.push_back(sample_label(SampleClass::kAnomaly, c.labels, label));
  }
  const std::vector<float> raw =
      raw_scores(params, to_batch<float>(std::span<const Image>(images)));
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i)
    sum += (raw[i] - targets[i]) * (raw[i] - targets[i]);
  return sum / static_cast<double>(raw.size());
}

TEST(Train, FirstEpochLossBelowUntrainedLoss) {
  const ProtocolSplit split = tiny_split(60);
  TrainConfig c = tiny_config();
  c.epochs = 1;
  double trained = 0.0, untrained = 0.0;
  for (std::uint64_t seed : {21, 22, 23}) {
    c.seed = seed;
    trained += train(c, split).history.epochs.at(0).train_loss;
    untrained += untrained_first_epoch_loss(c, split);
  }
  EXPECT_LT(trained, untrained);
}

TEST(Train, BceLossTrains) {
  const ProtocolSplit split = tiny_split();
  TrainConfig c = tiny_config();
  c.loss = LossKind::kBce;
  c.optimizer = OptimizerKind::kAmsgrad;
  c.epochs = 2;
  const TrainResult r = train(c, split);
  EXPECT_EQ(r.history.epochs.size(), 2u);
  EXPECT_TRUE(r.params.all_finite());
}

TEST(Train, NonFiniteInputRaisesDivergence) {
  ProtocolSplit split = tiny_split();
  split.train[0].pixels()[0] = std::numeric_limits<float>::quiet_NaN();
  TrainConfig c = tiny_config();
  c.batch_size = 2 * split.train.size();
  try {
    train(c, split);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(Train, EmptyTrainingSetRejected) {
  ProtocolSplit split = tiny_split();
  split.train.clear();
  EXPECT_THROW(train(tiny_config(), split), DataError);
}

}  // namespace
}  // namespace adacl
