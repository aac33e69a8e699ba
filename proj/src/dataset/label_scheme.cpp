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

#include "bnhate/dataset/label_scheme.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace bnhate::dataset {

std::string to_string(Subtask subtask) { return subtask == Subtask::k1A ? "1A" : "1B"; }

std::optional<Subtask> parse_subtask(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "1A") return Subtask::k1A;
  if (upper == "1B") return Subtask::k1B;
  return std::nullopt;
}

LabelScheme::LabelScheme(Subtask subtask, std::vector<std::string> names)
    : subtask_(subtask), names_(std::move(names)) {}

const LabelScheme& LabelScheme::get(Subtask subtask) {
  static const LabelScheme k1A(Subtask::k1A, {"None", "Abusive", "Political Hate", "Profane",
                                              "Religious Hate", "Sexism"});
  static const LabelScheme k1B(Subtask::k1B,
                               {"None", "Individual", "Organization", "Community", "Society"});
  return subtask == Subtask::k1A ? k1A : k1B;
}

std::optional<ClassId> LabelScheme::id(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ClassId>(it - names_.begin());
}

const std::string& LabelScheme::name(ClassId id) const {
  if (!valid(id)) throw std::out_of_range("class id " + std::to_string(id) + " outside scheme");
  return names_[static_cast<std::size_t>(id)];
}

}  // namespace bnhate::dataset
