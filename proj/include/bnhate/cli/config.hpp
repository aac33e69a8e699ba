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
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnhate/dataset/label_scheme.hpp"
#include "bnhate/encoder/encoder.hpp"
#include "bnhate/model/config.hpp"
#include "bnhate/training/trainer.hpp"

namespace bnhate::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataConfig {
  std::filesystem::path train;
  std::filesystem::path dev;  // empty: carve a stratified split out of train
  double dev_fraction = 0.1;
  std::uint64_t split_seed = 42;
  std::filesystem::path resources;  // empty: the shipped tables
  std::filesystem::path lexicon;    // empty: the emoji lexicon from `resources`
};

struct RunSection {
  std::filesystem::path output_dir = "runs/default";
  dataset::Subtask subtask = dataset::Subtask::k1A;
};

/// Every tunable of a run. Filled by layering built-in defaults, then a
/// config file, then command-line flags.
struct RunConfig {
  model::ModelConfig model;
  training::TrainConfig training;
  encoder::EncoderConfig encoder;
  DataConfig data;
  RunSection run;
  bool encoder_identifier_set = false;

  /// Derives num_labels from the subtask, gives the stub encoder the model
  /// seed unless an identifier was set, then validates.
  void finalize();
};

/// Applies one `section.key = value` setting. `origin` prefixes errors.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, const std::string& origin);

/// Flat sectioned format:
///
///   # comment
///   [training]
///   learning_rate = 1e-3
///   [model]
///   cnn_kernels = 1, 2, 3
void apply_config(RunConfig& cfg, std::istream& in, const std::string& source);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// `section.key` names accepted by apply_setting, in file order.
const std::vector<std::string>& setting_keys();

nlohmann::ordered_json to_json(const RunConfig& cfg);
/// Re-loadable text form of the resolved configuration.
std::string to_config_text(const RunConfig& cfg);

}  // namespace bnhate::cli
