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

#include "adacl/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "adacl/csv.hpp"
#include "adacl/error.hpp"
#include "adacl/metrics.hpp"

namespace adacl {
namespace {

constexpr std::size_t kScoreChunk = 256;

}  // namespace

EarlyStopping::EarlyStopping(std::size_t patience) : patience_(patience) {
  if (patience < 1) throw ConfigError("early stopping: patience must be >= 1");
}

bool EarlyStopping::update(const EpochRecord& rec) {
  // Higher AUROC wins; equal AUROC falls back to the lower validation loss.
  if (rec.val_auroc > best_auroc_ ||
      (rec.val_auroc == best_auroc_ && rec.val_loss < best_loss_)) {
    best_auroc_ = rec.val_auroc;
    best_loss_ = rec.val_loss;
    best_epoch_ = rec.epoch;
    since_best_ = 0;
    return true;
  }
  if (++since_best_ >= patience_ && !stopped()) stop_epoch_ = rec.epoch;
  return false;
}

std::string_view loss_name(LossKind loss) {
  return loss == LossKind::kMse ? "mse" : "bce";
}

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "amsgrad";
}

template <typename T>
void adam_step(std::vector<Tensor<T>>& params,
               const std::vector<Tensor<T>>& grads, AdamState<T>& state,
               double lr, const AdamOptions& options) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) +
                     " parameters but " + std::to_string(grads.size()) +
                     " gradients");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].shape() != grads[k].shape()) {
      throw ShapeError("adam: gradient " + std::to_string(k) + " has shape " +
                       to_string(grads[k].shape()) + ", parameter has " +
                       to_string(params[k].shape()));
    }
  }
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.shape());
      state.second_moment.emplace_back(p.shape());
      if (options.amsgrad) state.max_second_moment.emplace_back(p.shape());
    }
  }
  ++state.steps;
  const double t = static_cast<double>(state.steps);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  const T b1 = static_cast<T>(options.beta1);
  const T b2 = static_cast<T>(options.beta2);
  const T step = static_cast<T>(lr / correction1);
  const T root_c2 = static_cast<T>(std::sqrt(correction2));
  const T eps = static_cast<T>(options.epsilon);

  for (std::size_t k = 0; k < params.size(); ++k) {
    T* p = params[k].raw();
    const T* g = grads[k].raw();
    T* m = state.first_moment[k].raw();
    T* v = state.second_moment[k].raw();
    T* v_max = options.amsgrad ? state.max_second_moment[k].raw() : nullptr;
    for (std::size_t i = 0; i < params[k].size(); ++i) {
      m[i] = b1 * m[i] + (T{1} - b1) * g[i];
      v[i] = b2 * v[i] + (T{1} - b2) * g[i] * g[i];
      T second = v[i];
      if (v_max) {
        v_max[i] = std::max(v_max[i], v[i]);
        second = v_max[i];
      }
      p[i] -= step * m[i] / (std::sqrt(second) / root_c2 + eps);
    }
  }
}

template void adam_step(std::vector<Tensor<float>>&,
                        const std::vector<Tensor<float>>&, AdamState<float>&,
                        double, const AdamOptions&);
template void adam_step(std::vector<Tensor<double>>&,
                        const std::vector<Tensor<double>>&, AdamState<double>&,
                        double, const AdamOptions&);

double cyclic_lr(std::size_t step, const CyclicSchedule& schedule) {
  const auto cycle = static_cast<double>(schedule.cycle_steps);
  const double pos = static_cast<double>(step % schedule.cycle_steps);
  const double rise = 1.0 - std::abs(2.0 * pos / cycle - 1.0);
  return schedule.base + (schedule.max - schedule.base) * rise;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train: epochs must be at least 1");
  if (batch_size < 2 || batch_size % 2 != 0) {
    throw ConfigError("train: batch_size must be even and at least 2");
  }
  if (!(lr_base > 0.0 && lr_base < lr_max)) {
    throw ConfigError("train: need 0 < lr_base < lr_max");
  }
  if (cycle_epochs < 1) throw ConfigError("train: cycle_epochs must be >= 1");
  if (patience < 1) throw ConfigError("train: patience must be >= 1");
  labels.validate();
  augment.validate();
}

std::vector<double> score_images(const ModelParams<float>& params,
                                 std::span<const Image* const> images,
                                 LossKind loss) {
  std::vector<double> scores;
  scores.reserve(images.size());
  for (std::size_t start = 0; start < images.size(); start += kScoreChunk) {
    const auto chunk =
        images.subspan(start, std::min(kScoreChunk, images.size() - start));
    for (float raw : raw_scores(params, to_batch<float>(chunk))) {
      scores.push_back(loss == LossKind::kMse ? clamp_score<double>(raw)
                                              : sigmoid<double>(raw));
    }
  }
  return scores;
}

std::vector<double> score_images(const ModelParams<float>& params,
                                 std::span<const Image> images, LossKind loss) {
  std::vector<const Image*> pointers;
  pointers.reserve(images.size());
  for (const Image& image : images) pointers.push_back(&image);
  return score_images(params, std::span<const Image* const>(pointers), loss);
}

TrainResult train(const TrainConfig& config, const ProtocolSplit& split,
                  const EpochObserver& observer) {
  config.validate();
  if (split.train.empty()) throw DataError("train: no training images");
  const std::size_t channels = split.channels();
  const std::size_t half = config.batch_size / 2;
  const std::size_t n = split.train.size();
  const RngStream root(config.seed);

  RngStream init_rng = root.derive("init");
  ModelParams<float> params = build_model<float>(channels, init_rng);
  ModelParams<float> best = params;
  AdamState<float> adam;
  const AdamOptions adam_options{
      .amsgrad = config.optimizer == OptimizerKind::kAmsgrad};

  TrainHistory history;
  history.steps_per_epoch = (n + half - 1) / half;
  const CyclicSchedule schedule{config.lr_base, config.lr_max,
                                config.cycle_epochs * history.steps_per_epoch};

  EarlyStopping stopping(config.patience);
  std::size_t step = 0;

  std::vector<const Image*> batch_images;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream shuffle_rng = root.derive("shuffle", epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());

    double loss_sum = 0.0;
    double lr = config.lr_base;
    for (std::size_t start = 0; start < n; start += half, ++step) {
      const std::size_t m = std::min(half, n - start);
      std::vector<Image> anomalies;
      anomalies.reserve(m);
      Tensor<float> targets({2 * m, 1});
      batch_images.clear();
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t idx = order[start + j];
        RngStream aug_rng = root.derive("anomaly", epoch, idx);
        anomalies.push_back(
            create_anomaly(split.train[idx], config.augment, aug_rng).image);
        RngStream label_rng = root.derive("label", epoch, idx);
        targets[j] = static_cast<float>(
            sample_label(SampleClass::kNormal, config.labels, label_rng));
        targets[m + j] = static_cast<float>(
            sample_label(SampleClass::kAnomaly, config.labels, label_rng));
        batch_images.push_back(&split.train[idx]);
      }
      for (const Image& a : anomalies) batch_images.push_back(&a);

      Tape<float> tape;
      const NodeId input = tape.constant(
          to_batch<float>(std::span<const Image* const>(batch_images)));
      const ForwardNodes nodes = forward(tape, params, input, true);
      const NodeId target = tape.constant(std::move(targets));
      const NodeId loss = config.loss == LossKind::kMse
                              ? ops::mse_loss(tape, nodes.raw_score, target)
                              : ops::bce_loss(tape, nodes.raw_score, target);
      const double loss_value = tape.value(loss).item();
      if (!std::isfinite(loss_value)) {
        throw DivergenceError("train: non-finite loss at step " +
                                  std::to_string(step) + " (epoch " +
                                  std::to_string(epoch) + ")",
                              static_cast<long>(step));
      }
      GradientSet<float> grads = tape.backward(loss);
      lr = cyclic_lr(step, schedule);
      history.lr_trace.push_back(lr);
      adam_step(params.tensors(), grads.tensors(), adam, lr, adam_options);
      loss_sum += loss_value * static_cast<double>(m);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(n);
    rec.lr_end = lr;
    const std::vector<double> val_scores =
        score_images(params, split.validation.images, config.loss);
    rec.val_auroc = auroc({val_scores, split.validation.labels});
    for (std::size_t i = 0; i < val_scores.size(); ++i) {
      const double d = val_scores[i] - split.validation.labels[i];
      rec.val_loss += d * d;
    }
    rec.val_loss /= static_cast<double>(val_scores.size());
    history.epochs.push_back(rec);

    if (stopping.update(rec)) best = params;
    if (observer) observer(rec, params);
    if (stopping.stopped() && !config.run_full_budget) break;
  }
  history.best_epoch = stopping.best_epoch();
  if (stopping.stopped()) {
    history.stop_epoch = stopping.stop_epoch();
    history.stop_reason = "patience";
  } else {
    history.stop_epoch = history.epochs.back().epoch;
    history.stop_reason = "epoch_budget";
  }
  return {std::move(best), std::move(history)};
}

void write_history_csv(std::ostream& out, const TrainHistory& history) {
  out << "epoch,train_loss,val_auroc,lr_at_epoch_end\n";
  for (const auto& rec : history.epochs) {
    out << rec.epoch << ',' << csv::number(rec.train_loss) << ','
        << csv::number(rec.val_auroc) << ',' << csv::number(rec.lr_end) << '\n';
  }
}

}  // namespace adacl
