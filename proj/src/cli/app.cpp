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

#include "bnhate/cli/app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "bnhate/cli/config.hpp"
#include "bnhate/dataset/dataset.hpp"
#include "bnhate/encoder/backend_error.hpp"
#include "bnhate/encoder/pretrained.hpp"
#include "bnhate/evaluation/metrics.hpp"
#include "bnhate/model/checkpoint.hpp"
#include "bnhate/nn/safetensors.hpp"
#include "bnhate/textnorm/lexicon.hpp"
#include "bnhate/textnorm/normalizer.hpp"
#include "bnhate/training/trainer.hpp"

namespace bnhate::cli {
namespace {

namespace fs = std::filesystem;

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty()) throw ExitError(kConfigError, "no " + what + " given");
  if (!fs::is_regular_file(path)) throw ExitError(kIoError, what + " not found: " + path.string());
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExitError(kIoError, "cannot write " + path.string());
  return out;
}

void refuse_overwrite(const fs::path& input, const fs::path& output) {
  std::error_code ec;
  if (!output.empty() && fs::exists(output) && fs::equivalent(input, output, ec)) {
    throw ExitError(kConfigError, "refusing to overwrite the input file " + input.string());
  }
}

/// Global flags plus the `--set` escape hatch, shared by every subcommand.
struct Layers {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string subtask;
  std::string encoder_kind;
  std::vector<std::string> sets;
  // Subcommand flags, recorded as (key, value) in declaration order.
  std::vector<std::pair<std::string, std::string>> flags;
};

RunConfig resolve(const Layers& layers) {
  RunConfig cfg;
  if (!layers.config_path.empty()) {
    require_file(layers.config_path, "config file");
    apply_config_file(cfg, layers.config_path);
  }
  if (layers.seed) apply_setting(cfg, "run.seed", std::to_string(*layers.seed), "--seed");
  if (!layers.subtask.empty()) apply_setting(cfg, "run.subtask", layers.subtask, "--subtask");
  if (!layers.encoder_kind.empty()) apply_setting(cfg, "encoder.kind", layers.encoder_kind, "--encoder");
  for (const auto& [key, value] : layers.flags) apply_setting(cfg, key, value, "--" + key);
  for (const auto& s : layers.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + s + ": expected section.key=value");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1), "--set");
  }
  cfg.finalize();
  return cfg;
}

textnorm::Normalizer make_normalizer(const RunConfig& cfg) {
  if (cfg.data.resources.empty() && cfg.data.lexicon.empty()) return textnorm::Normalizer();
  const fs::path dir = cfg.data.resources.empty() ? textnorm::default_data_dir() : cfg.data.resources;
  if (!fs::is_directory(dir)) throw ExitError(kIoError, "resource directory not found: " + dir.string());
  std::optional<fs::path> lexicon;
  if (!cfg.data.lexicon.empty()) {
    require_file(cfg.data.lexicon, "lexicon");
    lexicon = cfg.data.lexicon;
  }
  return textnorm::Normalizer(textnorm::Resources::load(dir, lexicon));
}

/// Adds a flag that feeds `key` into the flag layer when given.
void layer_flag(CLI::App* app, Layers& layers, const std::string& flag, const std::string& key,
                const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&layers, key](const std::string& v) { layers.flags.emplace_back(key, v); }, help);
}

int cmd_normalize(const RunConfig& cfg, const fs::path& input, const fs::path& output, std::ostream& out) {
  require_file(input, "input file");
  refuse_overwrite(input, output);
  const auto normalizer = make_normalizer(cfg);
  std::ifstream in(input, std::ios::binary);
  if (!in) throw ExitError(kIoError, "cannot read " + input.string());
  std::ofstream file;
  if (!output.empty()) file = open_output(output);
  std::ostream& sink = output.empty() ? out : file;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    sink << normalizer.normalize(line).value() << '\n';
  }
  if (!sink) throw ExitError(kIoError, "write failed");
  return kOk;
}

int cmd_inspect(const RunConfig& cfg, const fs::path& path, bool json, std::ostream& out) {
  require_file(path, "dataset");
  const auto& scheme = dataset::LabelScheme::get(cfg.run.subtask);
  const auto data = dataset::load_dataset(path, scheme);
  const auto dist = dataset::distribution(data, scheme);
  if (json) {
    out << dataset::distribution_json(dist, scheme).dump(2) << '\n';
  } else {
    out << "subtask " << dataset::to_string(cfg.run.subtask) << ", " << path.string() << '\n'
        << dataset::format_distribution(dist, scheme);
  }
  return kOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.data.train, "training data (--train)");
  if (!cfg.data.dev.empty()) require_file(cfg.data.dev, "dev data (--dev)");
  const auto& scheme = dataset::LabelScheme::get(cfg.run.subtask);
  const auto normalizer = make_normalizer(cfg);

  auto train = dataset::load_dataset(cfg.data.train, scheme);
  std::vector<dataset::Example> dev;
  if (cfg.data.dev.empty()) {
    auto split = dataset::stratified_split(train, scheme, {cfg.data.dev_fraction, cfg.data.split_seed});
    train = std::move(split.train);
    dev = std::move(split.dev);
  } else {
    dev = dataset::load_dataset(cfg.data.dev, scheme);
  }

  model::Classifier<float> classifier(encoder::make_backend<float>(cfg.encoder, cfg.model.d_embed), cfg.model);
  const auto train_prepared = training::prepare(classifier, normalizer, train);
  const auto dev_prepared = training::prepare(classifier, normalizer, dev);

  const fs::path dir = cfg.run.output_dir;
  fs::create_directories(dir);
  dataset::save_dataset(dir / "train.tsv", train, scheme);
  dataset::save_dataset(dir / "dev.tsv", dev, scheme);
  {
    auto f = open_output(dir / "config.ini");
    f << to_config_text(cfg);
  }

  training::FitOptions options{dir, cfg.encoder, cfg.run.subtask, to_json(cfg)};
  const auto result = training::fit(classifier, train_prepared, dev_prepared, cfg.training, options);
  out << "train examples: " << train.size() << ", dev examples: " << dev.size() << '\n';
  for (const auto& e : result.epochs) {
    out << "epoch " << e.epoch << ": train loss " << std::setprecision(6) << e.train_loss << ", dev micro-F1 "
        << e.dev_micro_f1 << '\n';
  }
  out << "best dev micro-F1: " << std::setprecision(17) << result.best_dev_f1 << " (epoch " << result.best_epoch
      << ")\ncheckpoint: " << result.best_checkpoint.string() << '\n';
  return kOk;
}

struct Loaded {
  model::Checkpoint ckpt;
  std::unique_ptr<model::Classifier<float>> classifier;
};

Loaded load_model(const RunConfig& cfg, const fs::path& checkpoint, bool subtask_given) {
  require_file(checkpoint, "checkpoint");
  Loaded l;
  l.ckpt = model::read_checkpoint(checkpoint);
  if (subtask_given && l.ckpt.info.subtask != cfg.run.subtask) {
    throw ExitError(kConfigError, "label scheme mismatch: checkpoint was trained for subtask " +
                                      dataset::to_string(l.ckpt.info.subtask) + " but --subtask is " +
                                      dataset::to_string(cfg.run.subtask));
  }
  std::optional<fs::path> weights;
  if (!cfg.encoder.weights_dir.empty()) weights = cfg.encoder.weights_dir;
  l.classifier = model::restore_classifier(l.ckpt, weights);
  return l;
}

int cmd_evaluate(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& data_path,
                 const fs::path& json_path, bool subtask_given, std::ostream& out) {
  require_file(data_path, "evaluation data");
  auto loaded = load_model(cfg, checkpoint, subtask_given);
  const auto& scheme = dataset::LabelScheme::get(loaded.ckpt.info.subtask);
  const auto data = dataset::load_dataset(data_path, scheme);
  if (data.empty()) throw ExitError(kConfigError, "evaluation data is empty: " + data_path.string());
  const auto normalizer = make_normalizer(cfg);
  const auto pred = evaluation::predict(*loaded.classifier, normalizer, data);
  std::vector<dataset::ClassId> gold;
  for (const auto& ex : data) gold.push_back(ex.label);
  const auto report = evaluation::score(pred, gold, scheme);
  out << evaluation::format_report(report, scheme);
  if (!json_path.empty()) {
    auto f = open_output(json_path);
    f << evaluation::report_json(report, scheme).dump(2) << '\n';
  }
  return kOk;
}

int cmd_predict(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& input, const fs::path& output,
                bool subtask_given, std::ostream& out) {
  require_file(input, "input file");
  refuse_overwrite(input, output);
  auto loaded = load_model(cfg, checkpoint, subtask_given);
  const auto& scheme = dataset::LabelScheme::get(loaded.ckpt.info.subtask);
  const auto rows = dataset::load_texts(input);
  const auto normalizer = make_normalizer(cfg);
  std::vector<encoder::TokenizedInput> tokens;
  tokens.reserve(rows.size());
  for (const auto& r : rows) tokens.push_back(loaded.classifier->tokenize(normalizer.normalize(r.text)));
  const auto logits = loaded.classifier->forward_tokens(tokens);

  std::ostringstream buf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    buf << rows[i].id << '\t' << scheme.name(evaluation::argmax(logits[i])) << '\n';
  }
  if (output.empty()) {
    out << buf.str();
  } else {
    auto f = open_output(output);
    f << buf.str();
  }
  return kOk;
}

std::string settings_footer() {
  std::string s =
      "\nGlobal options, accepted before or after the subcommand:\n"
      "  --config PATH, --seed INT, --subtask {1A,1B}, --encoder {pretrained,stub}, --set section.key=value\n"
      "\nSettings accepted by --set and the config file:\n";
  for (const auto& k : setting_keys()) s += "  " + k + "\n";
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bangla hate-speech classification pipeline", "bnhate"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(settings_footer());

  Layers layers;
  app.add_option("--config", layers.config_path, "Config file (sectioned key = value)");
  app.add_option("--seed", layers.seed, "Seed for model init, shuffling and the dev split");
  auto* subtask_opt = app.add_option("--subtask", layers.subtask, "Label scheme")->check(CLI::IsMember({"1A", "1B"}));
  app.add_option("--encoder", layers.encoder_kind, "Encoder backend")->check(CLI::IsMember({"pretrained", "stub"}));
  app.add_option("--set", layers.sets, "Override any setting: section.key=value (repeatable)");

  fs::path input, output, data_path, checkpoint, json_path;
  bool as_json = false;

  auto* normalize = app.add_subcommand("normalize", "Normalize a text file line by line");
  normalize->add_option("input,-i,--input", input, "Input text file")->required();
  normalize->add_option("-o,--output", output, "Output file (default: stdout)");
  layer_flag(normalize, layers, "--lexicon", "data.lexicon", "Emoji lexicon replacing the shipped one");
  layer_flag(normalize, layers, "--resources", "data.resources", "Directory with the normalization tables");

  auto* inspect = app.add_subcommand("inspect-data", "Print the class distribution of a dataset");
  inspect->add_option("data", data_path, "Dataset TSV (id, text, label)")->required();
  inspect->add_flag("--json", as_json, "Print JSON instead of a table");

  auto* train = app.add_subcommand("train", "Train a classifier and write a checkpoint and run manifest");
  layer_flag(train, layers, "--train", "data.train", "Training data TSV");
  layer_flag(train, layers, "--dev", "data.dev", "Dev data TSV (default: stratified split of --train)");
  layer_flag(train, layers, "--output", "run.output_dir", "Run output directory");
  layer_flag(train, layers, "--max-epochs", "training.max_epochs", "Epoch budget");
  layer_flag(train, layers, "--patience", "training.patience", "Early-stopping patience in epochs");
  layer_flag(train, layers, "--batch-size", "training.batch_size", "Batch size");
  layer_flag(train, layers, "--learning-rate", "training.learning_rate", "AdamW learning rate");
  layer_flag(train, layers, "--weights-dir", "encoder.weights_dir", "Pretrained encoder directory");
  layer_flag(train, layers, "--lexicon", "data.lexicon", "Emoji lexicon replacing the shipped one");

  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on labeled data");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--data", data_path, "Labeled TSV (id, text, label)")->required();
  evaluate->add_option("--json", json_path, "Also write the report as JSON to this path");
  layer_flag(evaluate, layers, "--weights-dir", "encoder.weights_dir", "Pretrained encoder directory");
  layer_flag(evaluate, layers, "--lexicon", "data.lexicon", "Emoji lexicon replacing the shipped one");

  auto* predict = app.add_subcommand("predict", "Write id<TAB>label predictions");
  predict->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  predict->add_option("--input", input, "TSV with header id<TAB>text (a label column is ignored)")->required();
  predict->add_option("-o,--output", output, "Output TSV (default: stdout)");
  layer_flag(predict, layers, "--weights-dir", "encoder.weights_dir", "Pretrained encoder directory");
  layer_flag(predict, layers, "--lexicon", "data.lexicon", "Emoji lexicon replacing the shipped one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const RunConfig cfg = resolve(layers);
    const bool subtask_given = subtask_opt->count() > 0;
    if (normalize->parsed()) return cmd_normalize(cfg, input, output, out);
    if (inspect->parsed()) return cmd_inspect(cfg, data_path, as_json, out);
    if (train->parsed()) return cmd_train(cfg, out);
    if (evaluate->parsed()) return cmd_evaluate(cfg, checkpoint, data_path, json_path, subtask_given, out);
    if (predict->parsed()) return cmd_predict(cfg, checkpoint, input, output, subtask_given, out);
    return kConfigError;
  } catch (const ExitError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const training::NonFiniteLoss& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const dataset::DatasetError& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == dataset::DatasetError::Kind::kIo ? kIoError : kConfigError;
  } catch (const encoder::BackendUnavailable& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const textnorm::LexiconError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const model::CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nn::TensorFileError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace bnhate::cli
