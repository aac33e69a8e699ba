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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnhate/dataset/dataset.hpp"
#include "bnhate/model/classifier.hpp"
#include "bnhate/textnorm/normalizer.hpp"

namespace bnhate::evaluation {

using dataset::ClassId;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct EvalReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
  std::vector<std::vector<std::int64_t>> confusion;  // [gold][predicted]
  std::int64_t n = 0;
};

class EvaluationError : public std::invalid_argument {
 public:
  enum class Kind { kLengthMismatch, kInvalidId };
  EvaluationError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Index of the largest logit; ties go to the lowest index.
ClassId argmax(std::span<const double> logits);

/// Micro-F1 from globally pooled TP/FP/FN, one-vs-rest per-class
/// precision/recall/F1 (0/0 counts as 0), macro-F1 as their unweighted mean,
/// and the confusion matrix.
EvalReport score(std::span<const ClassId> pred, std::span<const ClassId> gold, const dataset::LabelScheme& scheme);

nlohmann::ordered_json report_json(const EvalReport& report, const dataset::LabelScheme& scheme);
std::string format_report(const EvalReport& report, const dataset::LabelScheme& scheme);

/// Normalizes, tokenizes and classifies each example in evaluation mode.
template <typename T>
std::vector<ClassId> predict(const model::Classifier<T>& classifier, const textnorm::Normalizer& normalizer,
                             const std::vector<dataset::Example>& data) {
  std::vector<encoder::TokenizedInput> tokens;
  tokens.reserve(data.size());
  for (const auto& ex : data) tokens.push_back(classifier.tokenize(normalizer.normalize(ex.text)));
  std::vector<ClassId> out;
  out.reserve(data.size());
  for (const auto& logits : classifier.forward_tokens(tokens)) out.push_back(argmax(logits));
  return out;
}

}  // namespace bnhate::evaluation
