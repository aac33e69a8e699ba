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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnhate/dataset/label_scheme.hpp"

namespace bnhate::dataset {

struct Example {
  std::string id;
  std::string text;  // raw; normalization happens downstream
  ClassId label = 0;

  friend bool operator==(const Example&, const Example&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  enum class Kind { kIo, kMalformedRow, kUnknownLabel, kDuplicateId, kEmptyDataset, kEmptyClass, kZeroCount };

  DatasetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Reads a UTF-8 TSV with the header `id<TAB>text<TAB>label`. Row order is
/// preserved. Errors name the 1-based file line.
std::vector<Example> load_dataset(const std::filesystem::path& path, const LabelScheme& scheme);
std::vector<Example> parse_dataset(std::istream& in, const std::string& source,
                                   const LabelScheme& scheme);

/// Writes the same format load_dataset reads.
struct TextRow {
  std::string id;
  std::string text;
};

/// Unlabeled input for prediction: header `id<TAB>text`, or a full labeled
/// file whose label column is ignored.
std::vector<TextRow> load_texts(const std::filesystem::path& path);
std::vector<TextRow> parse_texts(std::istream& in, const std::string& source);

void write_dataset(std::ostream& out, const std::vector<Example>& data, const LabelScheme& scheme);
void save_dataset(const std::filesystem::path& path, const std::vector<Example>& data,
                  const LabelScheme& scheme);

struct ClassDistribution {
  std::vector<std::size_t> counts;
  std::vector<double> fractions;
  std::size_t total = 0;
};

ClassDistribution distribution(const std::vector<Example>& data, const LabelScheme& scheme);

/// `{class: {count, fraction}}`.
nlohmann::ordered_json distribution_json(const ClassDistribution& dist, const LabelScheme& scheme);
/// Aligned table, one class per line plus a total line.
std::string format_distribution(const ClassDistribution& dist, const LabelScheme& scheme);

struct SplitSpec {
  double dev_fraction = 0.1;
  std::uint64_t seed = 42;
};

struct Split {
  std::vector<Example> train;
  std::vector<Example> dev;
};

/// Per class, round(count * dev_fraction) examples (at least one when the
/// class has two or more) go to dev, chosen by a seeded shuffle. Both halves
/// keep the input order. Classes absent from `data` are skipped.
Split stratified_split(const std::vector<Example>& data, const LabelScheme& scheme,
                       const SplitSpec& spec);

/// Inverse-frequency weights N / (K * count_c), rescaled to mean 1.
std::vector<double> class_weights(const ClassDistribution& dist, const LabelScheme& scheme);

}  // namespace bnhate::dataset
