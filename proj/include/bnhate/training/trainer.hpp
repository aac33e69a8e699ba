// Copyright 2026 The bnhate Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnhate/dataset/dataset.hpp"
#include "bnhate/encoder/encoder.hpp"
#include "bnhate/model/classifier.hpp"
#include "bnhate/nn/optim.hpp"
#include "bnhate/textnorm/normalizer.hpp"

namespace bnhate::training {

using dataset::ClassId;

struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 1e-5;
  int max_epochs = 10;
  int patience = 3;
  double grad_clip_norm = 1.0;
  bool use_class_weights = false;
  std::uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.01;

  /// Throws std::invalid_argument. A patience above max_epochs is allowed
  /// and simply never triggers.
  void validate() const;
  nn::AdamWConfig optimizer() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct TrainState {
  int epoch = 0;
  std::int64_t step = 0;
  double best_dev_f1 = -1.0;
  int best_epoch = 0;
  int epochs_since_best = 0;
};

class InvalidLabel : public std::invalid_argument {
 public:
  explicit InvalidLabel(ClassId id)
      : std::invalid_argument("invalid gold label id " + std::to_string(id)), id_(id) {}
  ClassId id() const noexcept { return id_; }

 private:
  ClassId id_;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(std::int64_t step, std::vector<std::string> batch_ids);
  std::int64_t step() const noexcept { return step_; }
  const std::vector<std::string>& batch_ids() const noexcept { return ids_; }

 private:
  std::int64_t step_;
  std::vector<std::string> ids_;
};

/// Mean cross-entropy of a batch. With non-empty `class_weights` the mean is
/// weighted: sum(w[gold] * l) / sum(w[gold]).
double loss(const std::vector<std::vector<double>>& logits, std::span<const ClassId> gold,
            std::span<const double> class_weights = {});

struct PreparedExample {
  std::string id;
  encoder::TokenizedInput tokens;
  ClassId label = 0;
};

std::vector<PreparedExample> prepare(const model::Classifier<float>& classifier,
                                     const textnorm::Normalizer& normalizer,
                                     const std::vector<dataset::Example>& data);

struct EpochResult {
  double mean_loss = 0.0;  // mean of the step losses
  std::vector<double> step_losses;
};

/// Owns the optimizer state for one classifier across epochs.
class Trainer {
 public:
  Trainer(model::Classifier<float>& classifier, TrainConfig cfg, std::vector<double> class_weights = {});

  /// One pass over `data` in the (seed, epoch) shuffled order. Epochs are
  /// numbered from 1.
  EpochResult train_epoch(const std::vector<PreparedExample>& data, int epoch);

  const TrainState& state() const { return state_; }
  TrainState& state() { return state_; }
  const TrainConfig& config() const { return cfg_; }
  /// Gradient norm before clipping at the most recent step.
  double last_grad_norm() const { return last_grad_norm_; }

 private:
  model::Classifier<float>& classifier_;
  TrainConfig cfg_;
  std::vector<double> weights_;
  nn::AdamW<float> optimizer_;
  TrainState state_;
  double last_grad_norm_ = 0.0;
};

/// Dev-set micro-F1 of the classifier in evaluation mode.
double dev_micro_f1(const model::Classifier<float>& classifier, const std::vector<PreparedExample>& dev,
                    const dataset::LabelScheme& scheme);

struct EarlyStopResult {
  int epochs_run = 0;
  int best_epoch = 0;
  double best_score = -1.0;
  std::vector<double> scores;
};

/// Calls `run_epoch(e)` for e = 1..max_epochs; it returns the dev score.
/// `on_improve(e)` fires whenever the score strictly exceeds the best so
/// far. Stops once `patience` consecutive epochs fail to improve.
EarlyStopResult early_stopping(int max_epochs, int patience, const std::function<double(int)>& run_epoch,
                               const std::function<void(int)>& on_improve);

struct FitOptions {
  std::filesystem::path output_dir;
  encoder::EncoderConfig encoder;
  dataset::Subtask subtask = dataset::Subtask::k1A;
  /// Echoed verbatim into the manifest.
  nlohmann::ordered_json resolved_config = nlohmann::ordered_json::object();
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_micro_f1 = 0.0;
  std::vector<double> step_losses;
  double seconds = 0.0;
};

struct FitResult {
  std::filesystem::path best_checkpoint;
  int best_epoch = 0;
  double best_dev_f1 = 0.0;
  std::vector<EpochRecord> epochs;
};

inline constexpr const char* kBestCheckpoint = "best.ckpt";
inline constexpr const char* kManifestFile = "run_manifest.json";
inline constexpr const char* kTimingsFile = "timings.json";

/// Trains with early stopping on dev micro-F1 and leaves best.ckpt,
/// run_manifest.json and timings.json in the output directory. The manifest
/// holds no wall-clock data, so identical runs give identical bytes.
FitResult fit(model::Classifier<float>& classifier, const std::vector<PreparedExample>& train,
              const std::vector<PreparedExample>& dev, const TrainConfig& cfg, const FitOptions& options);

}  // namespace bnhate::training
