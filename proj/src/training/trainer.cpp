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

#include "bnhate/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "bnhate/evaluation/metrics.hpp"
#include "bnhate/model/checkpoint.hpp"
#include "bnhate/rng.hpp"

namespace bnhate::training {
namespace {

constexpr std::uint64_t kDropoutStream = 0x64726f70;  // "drop"

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid training config: " + what);
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void TrainConfig::validate() const {
  require(batch_size >= 1, "batch_size must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be > 0");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(patience >= 1, "patience must be >= 1");
  require(grad_clip_norm > 0.0, "grad_clip_norm must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0, "betas must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be > 0");
  require(weight_decay >= 0.0, "weight_decay must be >= 0");
}

nn::AdamWConfig TrainConfig::optimizer() const {
  return {learning_rate, beta1, beta2, adam_eps, weight_decay};
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"batch_size", c.batch_size},       {"learning_rate", c.learning_rate},
       {"max_epochs", c.max_epochs},       {"patience", c.patience},
       {"grad_clip_norm", c.grad_clip_norm}, {"use_class_weights", c.use_class_weights},
       {"seed", c.seed},                   {"beta1", c.beta1},
       {"beta2", c.beta2},                 {"adam_eps", c.adam_eps},
       {"weight_decay", c.weight_decay}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.batch_size = j.value("batch_size", d.batch_size);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.max_epochs = j.value("max_epochs", d.max_epochs);
  c.patience = j.value("patience", d.patience);
  c.grad_clip_norm = j.value("grad_clip_norm", d.grad_clip_norm);
  c.use_class_weights = j.value("use_class_weights", d.use_class_weights);
  c.seed = j.value("seed", d.seed);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.adam_eps = j.value("adam_eps", d.adam_eps);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
}

NonFiniteLoss::NonFiniteLoss(std::int64_t step, std::vector<std::string> batch_ids)
    : std::runtime_error([&] {
        std::string msg = "non-finite loss at step " + std::to_string(step) + "; batch ids:";
        for (const auto& id : batch_ids) msg += " " + id;
        return msg;
      }()),
      step_(step),
      ids_(std::move(batch_ids)) {}

double loss(const std::vector<std::vector<double>>& logits, std::span<const ClassId> gold,
            std::span<const double> class_weights) {
  if (logits.size() != gold.size() || logits.empty()) {
    throw std::invalid_argument("loss: batch of " + std::to_string(logits.size()) + " logits vs " +
                                std::to_string(gold.size()) + " labels");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const auto& z = logits[i];
    const ClassId y = gold[i];
    if (y < 0 || static_cast<std::size_t>(y) >= z.size()) throw InvalidLabel(y);
    if (!class_weights.empty() && class_weights.size() != z.size()) {
      throw std::invalid_argument("loss: class weight count does not match logits width");
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    const double nll = mx + std::log(sum) - z[static_cast<std::size_t>(y)];
    const double w = class_weights.empty() ? 1.0 : class_weights[static_cast<std::size_t>(y)];
    num += w * nll;
    den += w;
  }
  return num / den;
}

std::vector<PreparedExample> prepare(const model::Classifier<float>& classifier,
                                     const textnorm::Normalizer& normalizer,
                                     const std::vector<dataset::Example>& data) {
  std::vector<PreparedExample> out;
  out.reserve(data.size());
  for (const auto& ex : data) {
    out.push_back({ex.id, classifier.tokenize(normalizer.normalize(ex.text)), ex.label});
  }
  return out;
}

Trainer::Trainer(model::Classifier<float>& classifier, TrainConfig cfg, std::vector<double> class_weights)
    : classifier_(classifier),
      cfg_(cfg),
      weights_(std::move(class_weights)),
      optimizer_(classifier.trainable_parameters(), cfg.optimizer()) {
  cfg_.validate();
  if (!weights_.empty() && weights_.size() != static_cast<std::size_t>(classifier.config().num_labels)) {
    throw std::invalid_argument("class weight count does not match num_labels");
  }
}

EpochResult Trainer::train_epoch(const std::vector<PreparedExample>& data, int epoch) {
  if (data.empty()) throw std::invalid_argument("train_epoch: empty training set");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffler(derive_seed(cfg_.seed, {static_cast<std::uint64_t>(epoch)}));
  shuffler.shuffle(std::span<std::size_t>(order));

  auto params = classifier_.trainable_parameters();
  const std::size_t bs = static_cast<std::size_t>(cfg_.batch_size);
  EpochResult result;
  for (std::size_t start = 0; start < order.size(); start += bs) {
    const std::size_t end = std::min(order.size(), start + bs);
    const std::int64_t step = state_.step + 1;
    std::vector<std::string> ids;
    double wsum = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      const auto& ex = data[order[k]];
      ids.push_back(ex.id);
      wsum += weights_.empty() ? 1.0 : weights_.at(static_cast<std::size_t>(ex.label));
    }

    optimizer_.zero_grad();
    double batch_loss = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      const auto& ex = data[order[k]];
      if (ex.label < 0 || ex.label >= classifier_.config().num_labels) throw InvalidLabel(ex.label);
      const double w = weights_.empty() ? 1.0 : weights_[static_cast<std::size_t>(ex.label)];
      Rng dropout_rng(derive_seed(cfg_.seed, {kDropoutStream, static_cast<std::uint64_t>(epoch),
                                              static_cast<std::uint64_t>(k)}));
      nn::Graph<float> g(true);
      const auto z = classifier_.logits(g, ex.tokens, true, dropout_rng);
      const auto l = g.cross_entropy(z, ex.label);
      const double lv = static_cast<double>(l.value()(0, 0));
      if (!std::isfinite(lv)) throw NonFiniteLoss(step, ids);
      batch_loss += w * lv;
      g.backward(l, static_cast<float>(w / wsum));
    }
    batch_loss /= wsum;

    last_grad_norm_ = nn::clip_grad_norm(params, cfg_.grad_clip_norm);
    if (!std::isfinite(last_grad_norm_)) throw NonFiniteLoss(step, ids);
    optimizer_.step();
    state_.step = step;
    result.step_losses.push_back(batch_loss);
  }
  optimizer_.zero_grad();
  state_.epoch = epoch;
  result.mean_loss = std::accumulate(result.step_losses.begin(), result.step_losses.end(), 0.0) /
                     static_cast<double>(result.step_losses.size());
  return result;
}

double dev_micro_f1(const model::Classifier<float>& classifier, const std::vector<PreparedExample>& dev,
                    const dataset::LabelScheme& scheme) {
  std::vector<encoder::TokenizedInput> tokens;
  std::vector<ClassId> gold;
  tokens.reserve(dev.size());
  for (const auto& ex : dev) {
    tokens.push_back(ex.tokens);
    gold.push_back(ex.label);
  }
  std::vector<ClassId> pred;
  for (const auto& z : classifier.forward_tokens(tokens)) pred.push_back(evaluation::argmax(z));
  return evaluation::score(pred, gold, scheme).micro_f1;
}

EarlyStopResult early_stopping(int max_epochs, int patience, const std::function<double(int)>& run_epoch,
                               const std::function<void(int)>& on_improve) {
  EarlyStopResult r;
  int since_best = 0;
  for (int e = 1; e <= max_epochs; ++e) {
    const double s = run_epoch(e);
    r.scores.push_back(s);
    r.epochs_run = e;
    if (r.best_epoch == 0 || s > r.best_score) {
      r.best_score = s;
      r.best_epoch = e;
      since_best = 0;
      on_improve(e);
    } else if (++since_best >= patience) {
      break;
    }
  }
  return r;
}

FitResult fit(model::Classifier<float>& classifier, const std::vector<PreparedExample>& train,
              const std::vector<PreparedExample>& dev, const TrainConfig& cfg, const FitOptions& options) {
  cfg.validate();
  if (dev.empty()) throw std::invalid_argument("fit: empty dev set");
  const auto& scheme = dataset::LabelScheme::get(options.subtask);
  if (static_cast<std::size_t>(classifier.config().num_labels) != scheme.size()) {
    throw model::ShapeMismatch("model has " + std::to_string(classifier.config().num_labels) +
                               " labels but subtask " + dataset::to_string(options.subtask) + " has " +
                               std::to_string(scheme.size()));
  }
  std::filesystem::create_directories(options.output_dir);

  std::vector<double> weights;
  if (cfg.use_class_weights) {
    std::vector<dataset::Example> labels_only;
    labels_only.reserve(train.size());
    for (const auto& ex : train) labels_only.push_back({ex.id, {}, ex.label});
    weights = dataset::class_weights(dataset::distribution(labels_only, scheme), scheme);
  }

  Trainer trainer(classifier, cfg, weights);
  FitResult result;
  result.best_checkpoint = options.output_dir / kBestCheckpoint;

  const auto stop = early_stopping(
      cfg.max_epochs, cfg.patience,
      [&](int epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        auto er = trainer.train_epoch(train, epoch);
        const double f1 = dev_micro_f1(classifier, dev, scheme);
        const auto t1 = std::chrono::steady_clock::now();
        result.epochs.push_back(
            {epoch, er.mean_loss, f1, std::move(er.step_losses), std::chrono::duration<double>(t1 - t0).count()});
        return f1;
      },
      [&](int) { model::save_checkpoint(result.best_checkpoint, classifier, options.encoder, options.subtask); });
  result.best_epoch = stop.best_epoch;
  result.best_dev_f1 = stop.best_score;

  auto& state = trainer.state();
  state.best_dev_f1 = stop.best_score;
  state.best_epoch = stop.best_epoch;
  state.epochs_since_best = stop.epochs_run - stop.best_epoch;

  nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
  nlohmann::ordered_json timings = nlohmann::ordered_json::array();
  double total = 0.0;
  for (const auto& e : result.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"dev_micro_f1", e.dev_micro_f1},
                      {"steps", e.step_losses.size()},
                      {"step_losses", e.step_losses}});
    timings.push_back({{"epoch", e.epoch}, {"seconds", e.seconds}});
    total += e.seconds;
  }
  nlohmann::json model_json = classifier.config();
  nlohmann::json train_json = cfg;
  nlohmann::ordered_json manifest = {
      {"format", "bnhate-run-manifest"},
      {"format_version", 1},
      {"resolved_config", options.resolved_config},
      {"subtask", dataset::to_string(options.subtask)},
      {"labels", scheme.names()},
      {"model", model_json},
      {"parameter_count", model::parameter_count(classifier.config())},
      {"encoder", model::encoder_to_json(options.encoder)},
      {"training", train_json},
      {"optimizer", nn::to_json(cfg.optimizer())},
      {"class_weights", weights},
      {"train_examples", train.size()},
      {"dev_examples", dev.size()},
      {"epochs", epochs},
      {"epochs_run", stop.epochs_run},
      {"total_steps", state.step},
      {"best_epoch", stop.best_epoch},
      {"best_dev_micro_f1", stop.best_score},
      {"checkpoint", kBestCheckpoint}};
  write_json(options.output_dir / kManifestFile, manifest);
  write_json(options.output_dir / kTimingsFile, {{"epochs", timings}, {"total_seconds", total}});
  return result;
}

}  // namespace bnhate::training
