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


#include "meshkit/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace meshkit {

void TrainConfig::validate() const {
  if (epochs < 0) throw ArgumentError("train: epochs must be non-negative");
  if (batch_size < 1) throw ArgumentError("train: batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ArgumentError("train: learning rate must be positive");
  if (!(lr_decay > 0.0)) throw ArgumentError("train: lr_decay must be positive");
  if (weight_decay < 0.0) throw ArgumentError("train: weight_decay must be non-negative");
  if (augment.scale_min <= 0.0 || augment.scale_max < augment.scale_min) {
    throw ArgumentError("train: bad scale range");
  }
  if (augment.vertex_dropout < 0.0 || augment.vertex_dropout >= 1.0 ||
      augment.facet_dropout < 0.0 || augment.facet_dropout >= 1.0) {
    throw ArgumentError("train: dropout rates must lie in [0, 1)");
  }
}

std::vector<std::string> TrainConfig::keys() {
  return {"epochs",        "batch_size",     "learning_rate",  "lr_decay",
          "weight_decay",  "augment_flip",   "augment_scale_min", "augment_scale_max",
          "augment_shift", "augment_rotation", "augment_vertex_dropout",
          "augment_facet_dropout", "augment_color_jitter"};
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& kv, const TrainConfig& base) {
  TrainConfig c = base;
  c.epochs = kv.get_int("epochs", c.epochs);
  c.batch_size = kv.get_int("batch_size", c.batch_size);
  c.learning_rate = kv.get_double("learning_rate", c.learning_rate);
  c.lr_decay = kv.get_double("lr_decay", c.lr_decay);
  c.weight_decay = kv.get_double("weight_decay", c.weight_decay);
  AugmentConfig& a = c.augment;
  a.flip = kv.get_bool("augment_flip", a.flip);
  a.scale_min = kv.get_double("augment_scale_min", a.scale_min);
  a.scale_max = kv.get_double("augment_scale_max", a.scale_max);
  a.shift = kv.get_double("augment_shift", a.shift);
  const std::string rot = kv.get_string("augment_rotation", "none");
  if (rot == "none") {
    a.rotation = RotationMode::kNone;
  } else if (rot == "z") {
    a.rotation = RotationMode::kAxisZ;
  } else if (rot == "cubic") {
    a.rotation = RotationMode::kCubic;
  } else if (rot == "free") {
    a.rotation = RotationMode::kFree;
  } else {
    throw ArgumentError("train: augment_rotation must be none, z, cubic or free");
  }
  a.vertex_dropout = kv.get_double("augment_vertex_dropout", a.vertex_dropout);
  a.facet_dropout = kv.get_double("augment_facet_dropout", a.facet_dropout);
  a.color_jitter = kv.get_double("augment_color_jitter", a.color_jitter);
  c.validate();
  return c;
}

double learning_rate_at(const TrainConfig& config, int epoch) {
  return config.learning_rate * std::pow(config.lr_decay, epoch);
}

Adam::Adam(ParameterStore& store, double beta1, double beta2, double epsilon)
    : store_(store), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  for (const Parameter& p : store_.parameters()) {
    m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
}

void Adam::step(double learning_rate, double weight_decay) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  auto& params = store_.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    Matrix g = p.grad;
    if (p.decay && weight_decay > 0.0) g += weight_decay * p.value;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseAbs2();
    p.value.array() -= learning_rate * (m_[i].array() / c1) /
                       ((v_[i].array() / c2).sqrt() + epsilon_);
  }
}

std::string format_epoch_record(const EpochRecord& r) {
  std::ostringstream s;
  s.precision(9);
  s << "epoch=" << r.epoch << " lr=" << r.lr << " loss=" << r.loss << " metric=" << r.metric;
  return s.str();
}

std::vector<int> predictions(const Matrix& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

namespace {

InputGeometry batch_geometry(std::span<const InputGeometry> prepared,
                             std::span<const std::size_t> order) {
  std::vector<const InputGeometry*> parts;
  parts.reserve(order.size());
  for (std::size_t i : order) parts.push_back(&prepared[i]);
  return stack_geometry(parts);
}

void check_labels(const Model& model, std::span<const Sample> data) {
  const NetworkConfig& c = model.config();
  for (const Sample& s : data) {
    if (c.task == Task::kClassification) {
      if (s.label < 0 || s.label >= c.num_classes) {
        throw ArgumentError("label outside the model's class range");
      }
    } else {
      for (int l : s.vertex_labels) {
        if (l < 0 || l >= c.num_classes) throw ArgumentError("label outside the model's class range");
      }
    }
  }
}

}  // namespace

std::vector<EpochRecord> train(Model& model, std::span<const Sample> data,
                               const TrainConfig& config,
                               const std::function<void(const EpochRecord&)>& on_epoch) {
  config.validate();
  if (data.empty()) throw ArgumentError("train: dataset is empty");
  check_labels(model, data);
  const bool fixed_geometry = config.augment.identity();
  std::vector<InputGeometry> cache;
  if (fixed_geometry) {
    cache.reserve(data.size());
    for (const Sample& s : data) cache.push_back(prepare_sample(s, model.config()));
  }
  ParameterStore& store = model.store();
  Adam adam(store);
  std::vector<Matrix> last_good;
  std::vector<EpochRecord> log;
  std::vector<std::size_t> order(data.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng = stream_engine(config.seed, static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = learning_rate_at(config, epoch);
    double loss_sum = 0.0;
    long correct = 0, total = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::span<const std::size_t> ids(order.data() + start, end - start);
      InputGeometry input;
      if (fixed_geometry) {
        input = batch_geometry(cache, ids);
      } else {
        std::vector<InputGeometry> prepared;
        for (std::size_t i : ids) {
          std::mt19937_64 aug = stream_engine(config.seed ^ 0xa5a5a5a5ULL,
                                              static_cast<std::uint64_t>(epoch) * data.size() + i);
          prepared.push_back(prepare_sample(augment(data[i], config.augment, aug), model.config()));
        }
        std::vector<const InputGeometry*> parts;
        for (const InputGeometry& g : prepared) parts.push_back(&g);
        input = stack_geometry(parts);
      }
      last_good.clear();
      for (const Parameter& p : store.parameters()) last_good.push_back(p.value);
      store.zero_grad();
      Tape tape(&store);
      const Var logits = model.forward(tape, input, true);
      const Var loss = model.loss(tape, input, logits);
      const double value = tape.value(loss)(0, 0);
      if (!std::isfinite(value)) {
        for (std::size_t i = 0; i < last_good.size(); ++i) store[static_cast<int>(i)].value = last_good[i];
        throw DivergenceError("train: loss is not finite", epoch);
      }
      tape.backward(loss);
      adam.step(lr, config.weight_decay);
      const std::span<const int> targets = model.targets(input);
      const std::vector<int> pred = predictions(tape.value(logits));
      for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == targets[i];
      total += static_cast<long>(pred.size());
      loss_sum += value * static_cast<double>(ids.size());
    }
    EpochRecord rec{epoch, lr, loss_sum / static_cast<double>(data.size()),
                    total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0};
    log.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return log;
}

Metrics metrics_from_confusion(const std::vector<std::vector<long>>& confusion) {
  Metrics m;
  const std::size_t k = confusion.size();
  m.num_classes = static_cast<int>(k);
  m.confusion = confusion;
  m.iou.assign(k, std::numeric_limits<double>::quiet_NaN());
  long total = 0, diag = 0;
  std::vector<long> row(k, 0), col(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (confusion[i].size() != k) throw ArgumentError("metrics: confusion matrix is not square");
    for (std::size_t j = 0; j < k; ++j) {
      row[i] += confusion[i][j];
      col[j] += confusion[i][j];
      total += confusion[i][j];
    }
    diag += confusion[i][i];
  }
  m.overall_accuracy = total ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
  double acc_sum = 0.0, iou_sum = 0.0;
  int acc_n = 0, iou_n = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const long tp = confusion[i][i];
    if (row[i] > 0) {
      acc_sum += static_cast<double>(tp) / static_cast<double>(row[i]);
      ++acc_n;
    }
    const long denom = row[i] + col[i] - tp;
    if (denom > 0) {
      m.iou[i] = static_cast<double>(tp) / static_cast<double>(denom);
      iou_sum += m.iou[i];
      ++iou_n;
    }
  }
  m.mean_accuracy = acc_n ? acc_sum / acc_n : 0.0;
  m.mean_iou = iou_n ? iou_sum / iou_n : 0.0;
  return m;
}

Matrix predict(Model& model, std::span<const Sample> batch) {
  std::vector<InputGeometry> prepared;
  for (const Sample& s : batch) prepared.push_back(prepare_sample(s, model.config()));
  std::vector<const InputGeometry*> parts;
  for (const InputGeometry& g : prepared) parts.push_back(&g);
  const InputGeometry input = stack_geometry(parts);
  Tape tape(&model.store());
  return tape.value(model.forward(tape, input, false));
}

Metrics evaluate(Model& model, std::span<const Sample> data, int batch_size) {
  if (batch_size < 1) throw ArgumentError("evaluate: batch_size must be positive");
  check_labels(model, data);
  const int k = model.config().num_classes;
  std::vector<std::vector<long>> confusion(static_cast<std::size_t>(k),
                                           std::vector<long>(static_cast<std::size_t>(k), 0));
  double loss_sum = 0.0;
  long count = 0;
  for (std::size_t start = 0; start < data.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(data.size(), start + static_cast<std::size_t>(batch_size));
    std::vector<InputGeometry> prepared;
    for (std::size_t i = start; i < end; ++i) prepared.push_back(prepare_sample(data[i], model.config()));
    std::vector<const InputGeometry*> parts;
    for (const InputGeometry& g : prepared) parts.push_back(&g);
    const InputGeometry input = stack_geometry(parts);
    Tape tape(&model.store());
    const Var logits = model.forward(tape, input, false);
    const Var loss = model.loss(tape, input, logits);
    const double value = tape.value(loss)(0, 0);
    if (!std::isfinite(value)) throw NumericError("evaluate: loss is not finite");
    const std::span<const int> targets = model.targets(input);
    const std::vector<int> pred = predictions(tape.value(logits));
    for (std::size_t i = 0; i < pred.size(); ++i) {
      ++confusion[static_cast<std::size_t>(targets[i])][static_cast<std::size_t>(pred[i])];
    }
    loss_sum += value * static_cast<double>(pred.size());
    count += static_cast<long>(pred.size());
  }
  Metrics m = metrics_from_confusion(confusion);
  m.loss = count ? loss_sum / static_cast<double>(count) : 0.0;
  return m;
}

}  // namespace meshkit
