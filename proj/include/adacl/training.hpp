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

#ifndef ADACL_TRAINING_HPP_
#define ADACL_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adacl/augment.hpp"
#include "adacl/data.hpp"
#include "adacl/labelling.hpp"
#include "adacl/model.hpp"

namespace adacl {

enum class LossKind { kMse, kBce };
enum class OptimizerKind { kAdam, kAmsgrad };

std::string_view loss_name(LossKind loss);
std::string_view optimizer_name(OptimizerKind kind);

// Optimizer ------------------------------------------------------------------

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Use the running maximum of the second moment (AMSGrad).
  bool amsgrad = false;
};

template <typename T>
struct AdamState {
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;
  std::vector<Tensor<T>> max_second_moment;  // AMSGrad only
  std::size_t steps = 0;
};

/// Bias-corrected Adam update, in place. State buffers are created on the
/// first call. Throws ShapeError when `grads` does not mirror `params`.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params,
               const std::vector<Tensor<T>>& grads, AdamState<T>& state,
               double lr, const AdamOptions& options = {});

// Learning-rate schedule -----------------------------------------------------

/// Triangular cyclic schedule: lr rises linearly from `base` to `max` over
/// half a cycle and falls back over the other half.
struct CyclicSchedule {
  double base = 1e-4;
  double max = 1e-3;
  std::size_t cycle_steps = 2;
};

double cyclic_lr(std::size_t step, const CyclicSchedule& schedule);

// Training -------------------------------------------------------------------

struct TrainConfig {
  std::size_t epochs = 10;
  /// Even; each batch holds batch_size / 2 normals and as many anomalies.
  std::size_t batch_size = 64;
  LossKind loss = LossKind::kMse;
  LabelScheme labels;
  AugmentConfig augment;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double lr_base = 1e-4;
  double lr_max = 1e-3;
  std::size_t cycle_epochs = 2;
  /// Epochs without validation improvement before stopping.
  std::size_t patience = 3;
  /// Keep training (and reporting epochs) after the early-stopping point; the
  /// returned checkpoint is the best validation epoch of the whole run.
  bool run_full_budget = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_auroc = 0.0;
  double val_loss = 0.0;  // validation MSE of scores against 0/1 truth
  double lr_end = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::vector<double> lr_trace;  // one entry per optimizer step
  std::size_t steps_per_epoch = 0;
  std::size_t best_epoch = 0;  // 1-based
  std::size_t stop_epoch = 0;  // epoch after which early stopping fired
  std::string stop_reason;     // "epoch_budget" or "patience"
};

/// Tracks the best validation epoch: higher AUROC wins, ties go to the lower
/// validation loss. Stops after `patience` epochs without improvement; epochs
/// fed in after that (full-budget runs) still compete for best.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience);

  /// Returns true when `rec` becomes the best epoch so far.
  bool update(const EpochRecord& rec);

  bool stopped() const noexcept { return stop_epoch_ != 0; }
  std::size_t best_epoch() const noexcept { return best_epoch_; }
  std::size_t stop_epoch() const noexcept { return stop_epoch_; }

 private:
  std::size_t patience_;
  double best_auroc_ = -std::numeric_limits<double>::infinity();
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  std::size_t stop_epoch_ = 0;
};

struct TrainResult {
  ModelParams<float> params;
  TrainHistory history;
};

/// Called after every completed epoch with the current (not best) weights.
using EpochObserver =
    std::function<void(const EpochRecord&, const ModelParams<float>&)>;

/// Trains the regressor on split.train with freshly created anomalies each
/// epoch and returns the checkpoint with the best validation AUROC.
/// Throws DivergenceError when the loss becomes non-finite.
TrainResult train(const TrainConfig& config, const ProtocolSplit& split,
                  const EpochObserver& observer = {});

/// Per-image anomaly scores in [0, 1]: clamp(raw) for MSE-trained models,
/// sigmoid(raw) for BCE-trained ones (the raw output is then a logit).
std::vector<double> score_images(const ModelParams<float>& params,
                                 std::span<const Image> images,
                                 LossKind loss = LossKind::kMse);
std::vector<double> score_images(const ModelParams<float>& params,
                                 std::span<const Image* const> images,
                                 LossKind loss = LossKind::kMse);

/// CSV with header "epoch,train_loss,val_auroc,lr_at_epoch_end".
void write_history_csv(std::ostream& out, const TrainHistory& history);

}  // namespace adacl

#endif  // ADACL_TRAINING_HPP_
