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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnhate::nn {

/// Tensor as stored on disk: row-major float32 payload.
struct TensorRecord {
  std::vector<std::int64_t> shape;
  std::vector<float> data;

  std::int64_t numel() const;
};

/// Contents of a safetensors container: an 8-byte little-endian header
/// length, a JSON header, then the raw tensor bytes.
struct TensorFile {
  std::map<std::string, std::string> metadata;
  std::map<std::string, TensorRecord> tensors;
};

class TensorFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads F32, F64, F16 and BF16 tensors (converted to float32).
TensorFile read_tensor_file(const std::filesystem::path& path);

/// Writes float32 tensors. Output bytes depend only on the arguments.
void write_tensor_file(const std::filesystem::path& path, const TensorFile& file);

}  // namespace bnhate::nn
