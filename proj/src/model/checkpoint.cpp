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

#include "bnhate/model/checkpoint.hpp"

#include <set>

#include "bnhate/encoder/pretrained.hpp"

namespace bnhate::model {

nlohmann::json encoder_to_json(const encoder::EncoderConfig& c) {
  return {{"kind", encoder::to_string(c.kind)},
          {"identifier", c.identifier},
          {"weights_dir", c.weights_dir.string()},
          {"trainable", c.trainable},
          {"max_seq_len", c.max_seq_len},
          {"stub_vocab_size", c.stub_vocab_size}};
}

encoder::EncoderConfig encoder_from_json(const nlohmann::json& j) {
  encoder::EncoderConfig c;
  const auto kind = encoder::parse_encoder_kind(j.at("kind").get<std::string>());
  if (!kind) throw CheckpointError("unknown encoder kind in checkpoint");
  c.kind = *kind;
  c.identifier = j.at("identifier").get<std::string>();
  c.weights_dir = j.at("weights_dir").get<std::string>();
  c.trainable = j.at("trainable").get<bool>();
  c.max_seq_len = j.at("max_seq_len").get<int>();
  c.stub_vocab_size = j.at("stub_vocab_size").get<encoder::TokenId>();
  return c;
}

void save_checkpoint(const std::filesystem::path& path, Classifier<float>& classifier,
                     const encoder::EncoderConfig& encoder_cfg, dataset::Subtask subtask) {
  nn::TensorFile file;
  const auto& scheme = dataset::LabelScheme::get(subtask);
  file.metadata["format"] = kCheckpointFormat;
  file.metadata["format_version"] = std::to_string(kCheckpointVersion);
  file.metadata["model_config"] = nlohmann::json(classifier.config()).dump();
  file.metadata["encoder"] = encoder_to_json(encoder_cfg).dump();
  file.metadata["subtask"] = dataset::to_string(subtask);
  file.metadata["labels"] = nlohmann::json(scheme.names()).dump();
  file.metadata["parameter_count"] = std::to_string(parameter_count(classifier.config()));

  const bool with_encoder = classifier.backend().trainable();
  for (auto* p : with_encoder ? classifier.parameters() : classifier.head().parameters()) {
    nn::TensorRecord t;
    t.shape = {p->value().rows(), p->value().cols()};
    t.data.assign(p->value().data(), p->value().data() + p->value().size());
    if (!file.tensors.emplace(p->name(), std::move(t)).second) {
      throw CheckpointError("duplicate parameter name " + p->name());
    }
  }
  nn::write_tensor_file(path, file);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  Checkpoint ckpt;
  try {
    ckpt.tensors = nn::read_tensor_file(path);
  } catch (const nn::TensorFileError& e) {
    throw CheckpointError(e.what());
  }
  const auto& md = ckpt.tensors.metadata;
  const auto get = [&](const char* key) -> const std::string& {
    const auto it = md.find(key);
    if (it == md.end()) throw CheckpointError(path.string() + ": missing metadata '" + key + "'");
    return it->second;
  };
  if (get("format") != kCheckpointFormat) throw CheckpointError(path.string() + ": not a bnhate checkpoint");
  ckpt.info.format_version = std::stoi(get("format_version"));
  if (ckpt.info.format_version != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " + get("format_version"));
  }
  try {
    ckpt.info.model = nlohmann::json::parse(get("model_config")).get<ModelConfig>();
    ckpt.info.encoder = encoder_from_json(nlohmann::json::parse(get("encoder")));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path.string() + ": bad configuration metadata: " + e.what());
  }
  const auto subtask = dataset::parse_subtask(get("subtask"));
  if (!subtask) throw CheckpointError(path.string() + ": bad subtask " + get("subtask"));
  ckpt.info.subtask = *subtask;
  ckpt.info.parameter_count = std::stoll(get("parameter_count"));
  if (ckpt.info.parameter_count != parameter_count(ckpt.info.model)) {
    throw CheckpointError(path.string() + ": parameter count does not match its configuration");
  }
  return ckpt;
}

std::unique_ptr<Classifier<float>> restore_classifier(const Checkpoint& ckpt,
                                                      const std::optional<std::filesystem::path>& weights_dir) {
  encoder::EncoderConfig ecfg = ckpt.info.encoder;
  if (weights_dir) ecfg.weights_dir = *weights_dir;
  auto classifier = std::make_unique<Classifier<float>>(
      encoder::make_backend<float>(ecfg, ckpt.info.model.d_embed), ckpt.info.model);

  std::set<std::string> used;
  const auto assign = [&](nn::Parameter<float>& p) {
    const auto it = ckpt.tensors.tensors.find(p.name());
    if (it == ckpt.tensors.tensors.end()) return false;
    const auto& t = it->second;
    if (t.shape.size() != 2 || t.shape[0] != p.value().rows() || t.shape[1] != p.value().cols()) {
      throw CheckpointError("tensor " + p.name() + " has the wrong shape");
    }
    p.value() = Eigen::Map<const nn::Matrix<float>>(t.data.data(), p.value().rows(), p.value().cols());
    used.insert(p.name());
    return true;
  };
  for (auto* p : classifier->head().parameters()) {
    if (!assign(*p)) throw CheckpointError("checkpoint lacks head tensor " + p->name());
  }
  nn::ParameterList<float> enc;
  classifier->backend().collect(enc);
  for (auto* p : enc) assign(*p);
  if (used.size() != ckpt.tensors.tensors.size()) {
    throw CheckpointError("checkpoint holds tensors the model does not use");
  }
  return classifier;
}

}  // namespace bnhate::model
