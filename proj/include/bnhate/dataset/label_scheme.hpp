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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bnhate::dataset {

using ClassId = std::int32_t;

enum class Subtask { k1A, k1B };

std::string to_string(Subtask subtask);
/// Accepts "1A"/"1B" (case-insensitive).
std::optional<Subtask> parse_subtask(std::string_view text);

/// Closed class vocabulary of one subtask with a name <-> id bijection.
class LabelScheme {
 public:
  static const LabelScheme& get(Subtask subtask);

  Subtask subtask() const { return subtask_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<ClassId> id(std::string_view name) const;
  const std::string& name(ClassId id) const;
  bool valid(ClassId id) const { return id >= 0 && static_cast<std::size_t>(id) < names_.size(); }

 private:
  LabelScheme(Subtask subtask, std::vector<std::string> names);

  Subtask subtask_;
  std::vector<std::string> names_;
};

}  // namespace bnhate::dataset
