// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "meshkit/model.h"
#include "meshkit/synth.h"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace meshkit {

struct TrainConfig {
  int epochs = 60;
  int batch_size = 8;
  double learning_rate = 1e-3;
  double lr_decay = 0.98;  // per epoch
  double weight_decay = 1e-5;
  std::uint64_t seed = 0;
  AugmentConfig augment;

  void validate() const;
  static TrainConfig from_config(const KeyValueConfig& kv, const TrainConfig& base);
  static std::vector<std::string> keys();
};

/// learning_rate * lr_decay^epoch, epochs counted from 0.
double learning_rate_at(const TrainConfig& config, int epoch);

class Adam {
 public:
  explicit Adam(ParameterStore& store, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);
  /// Applies one update from the accumulated gradients. Weight decay adds
  /// decay * value to the gradient of every parameter marked for decay.
  void step(double learning_rate, double weight_decay);
  int steps() const { return t_; }

 private:
  ParameterStore& store_;
  double beta1_, beta2_, epsilon_;
  int t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double loss = 0.0;
  double metric = 0.0;  // training accuracy of the epoch
};

std::string format_epoch_record(const EpochRecord& record);

/// Raised when the loss stops being finite. The model holds the parameters
/// of the last finite step when this is thrown.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, int epoch) : NumericError(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Mini-batch training with a per-epoch shuffle drawn from the seed.
std::vector<EpochRecord> train(Model& model, std::span<const Sample> data,
                               const TrainConfig& config,
                               const std::function<void(const EpochRecord&)>& on_epoch = {});

struct Metrics {
  int num_classes = 0;
  std::vector<std::vector<long>> confusion;  // [truth][prediction]
  double overall_accuracy = 0.0;
  double mean_accuracy = 0.0;   // over classes present in the truth
  std::vector<double> iou;      // per class; NaN when the class never occurs
  double mean_iou = 0.0;        // over classes with a defined IoU
  double loss = 0.0;
};

Metrics metrics_from_confusion(const std::vector<std::vector<long>>& confusion);

/// Arg-max of every logit row.
std::vector<int> predictions(const Matrix& logits);

/// Evaluation-mode metrics. Throws ArgumentError when a label is outside the
/// model's class range.
Metrics evaluate(Model& model, std::span<const Sample> data, int batch_size = 8);

/// Evaluation-mode logits of one batch.
Matrix predict(Model& model, std::span<const Sample> batch);

}  // namespace meshkit
