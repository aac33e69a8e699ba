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

#include <stdexcept>
#include <string>

namespace bnhate::encoder {

/// Pretrained weights or tokenizer files are missing. `artifact()` names the
/// missing file.
class BackendUnavailable : public std::runtime_error {
 public:
  explicit BackendUnavailable(std::string artifact)
      : std::runtime_error("pretrained encoder artifact not found: " + artifact), artifact_(std::move(artifact)) {}
  const std::string& artifact() const noexcept { return artifact_; }

 private:
  std::string artifact_;
};

}  // namespace bnhate::encoder
