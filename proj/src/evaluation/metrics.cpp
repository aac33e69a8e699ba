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

#include "bnhate/evaluation/metrics.hpp"

#include <iomanip>
#include <sstream>

namespace bnhate::evaluation {
namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double p, double r) { return safe_div(2.0 * p * r, p + r); }

}  // namespace

ClassId argmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("argmax of empty logits");
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return static_cast<ClassId>(best);
}

EvalReport score(std::span<const ClassId> pred, std::span<const ClassId> gold, const dataset::LabelScheme& scheme) {
  if (pred.size() != gold.size()) {
    throw EvaluationError(EvaluationError::Kind::kLengthMismatch,
                          "prediction count " + std::to_string(pred.size()) + " != gold count " +
                              std::to_string(gold.size()));
  }
  if (pred.empty()) throw EvaluationError(EvaluationError::Kind::kLengthMismatch, "nothing to score");
  const std::size_t K = scheme.size();
  EvalReport r;
  r.n = static_cast<std::int64_t>(pred.size());
  r.confusion.assign(K, std::vector<std::int64_t>(K, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!scheme.valid(pred[i]) || !scheme.valid(gold[i])) {
      throw EvaluationError(EvaluationError::Kind::kInvalidId, "class id out of range at index " + std::to_string(i));
    }
    ++r.confusion[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
  }

  std::int64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  r.per_class.resize(K);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < K; ++c) {
    std::int64_t row = 0, col = 0;
    for (std::size_t k = 0; k < K; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    const std::int64_t tp = r.confusion[c][c];
    const std::int64_t fp = col - tp;
    const std::int64_t fn = row - tp;
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
    ClassMetrics& m = r.per_class[c];
    m.support = row;
    m.precision = safe_div(static_cast<double>(tp), static_cast<double>(tp + fp));
    m.recall = safe_div(static_cast<double>(tp), static_cast<double>(tp + fn));
    m.f1 = f1_of(m.precision, m.recall);
    f1_sum += m.f1;
  }
  // Pooled F1 in count form, 2TP / (2TP + FP + FN). With one label per
  // example FP = FN = n - TP, so this is exactly trace / n.
  r.micro_f1 = safe_div(2.0 * static_cast<double>(tp_sum), static_cast<double>(2 * tp_sum + fp_sum + fn_sum));
  r.macro_f1 = f1_sum / static_cast<double>(K);
  return r;
}

nlohmann::ordered_json report_json(const EvalReport& report, const dataset::LabelScheme& scheme) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    per_class[scheme.names()[c]] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  return {{"n", report.n},
          {"micro_f1", report.micro_f1},
          {"macro_f1", report.macro_f1},
          {"per_class", per_class},
          {"labels", scheme.names()},
          {"confusion", report.confusion}};
}

std::string format_report(const EvalReport& report, const dataset::LabelScheme& scheme) {
  std::size_t width = 5;
  for (const auto& n : scheme.names()) width = std::max(width, n.size());
  const int w = static_cast<int>(width);
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "examples: " << report.n << "\nmicro-F1: " << report.micro_f1 << "\nmacro-F1: " << report.macro_f1
     << "\n\n";
  os << std::left << std::setw(w) << "class" << std::right << std::setw(11) << "precision" << std::setw(9)
     << "recall" << std::setw(9) << "f1" << std::setw(9) << "support" << '\n';
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    os << std::left << std::setw(w) << scheme.names()[c] << std::right << std::setw(11) << m.precision
       << std::setw(9) << m.recall << std::setw(9) << m.f1 << std::setw(9) << m.support << '\n';
  }
  os << "\nconfusion (rows = gold, columns = predicted):\n";
  for (std::size_t c = 0; c < report.confusion.size(); ++c) {
    os << std::left << std::setw(w) << scheme.names()[c] << std::right;
    for (auto v : report.confusion[c]) os << std::setw(7) << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace bnhate::evaluation
