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
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "bnhate/dataset/label_scheme.hpp"
#include "bnhate/encoder/encoder.hpp"
#include "bnhate/model/classifier.hpp"
#include "bnhate/model/config.hpp"
#include "bnhate/nn/safetensors.hpp"

namespace bnhate::model {

inline constexpr const char* kCheckpointFormat = "bnhate-checkpoint";
inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json encoder_to_json(const encoder::EncoderConfig& c);
encoder::EncoderConfig encoder_from_json(const nlohmann::json& j);

/// Everything in a checkpoint besides the tensors.
struct CheckpointInfo {
  int format_version = kCheckpointVersion;
  ModelConfig model;
  encoder::EncoderConfig encoder;
  dataset::Subtask subtask = dataset::Subtask::k1A;
  std::int64_t parameter_count = 0;
};

struct Checkpoint {
  CheckpointInfo info;
  nn::TensorFile tensors;
};

/// Writes head parameters (and encoder parameters when the encoder was
/// fine-tuned) as named float32 tensors, with the configuration in the
/// container metadata.
void save_checkpoint(const std::filesystem::path& path, Classifier<float>& classifier,
                     const encoder::EncoderConfig& encoder_cfg, dataset::Subtask subtask);

/// Parses a checkpoint; needs no encoder weights.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Rebuilds the classifier. `weights_dir` overrides the stored location of
/// pretrained encoder files.
std::unique_ptr<Classifier<float>> restore_classifier(
    const Checkpoint& ckpt, const std::optional<std::filesystem::path>& weights_dir = std::nullopt);

}  // namespace bnhate::model
