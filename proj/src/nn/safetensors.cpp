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

#include "bnhate/nn/safetensors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

namespace bnhate::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "tensor files are little-endian");

float half_to_float(std::uint16_t h) {
  const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
  std::uint32_t exp = (h >> 10) & 0x1Fu;
  std::uint32_t mant = h & 0x3FFu;
  std::uint32_t bits;
  if (exp == 0) {
    if (mant == 0) {
      bits = sign;
    } else {
      exp = 127 - 15 + 1;
      while ((mant & 0x400u) == 0) {
        mant <<= 1;
        --exp;
      }
      mant &= 0x3FFu;
      bits = sign | (exp << 23) | (mant << 13);
    }
  } else if (exp == 0x1F) {
    bits = sign | 0x7F800000u | (mant << 13);
  } else {
    bits = sign | ((exp + 127 - 15) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

std::size_t dtype_size(const std::string& dtype) {
  if (dtype == "F32") return 4;
  if (dtype == "F64") return 8;
  if (dtype == "F16" || dtype == "BF16") return 2;
  throw TensorFileError("unsupported tensor dtype " + dtype);
}

}  // namespace

std::int64_t TensorRecord::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1}, std::multiplies<>());
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TensorFileError("cannot open " + path.string());
  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  if (!in || header_len > (1ull << 30)) throw TensorFileError(path.string() + ": bad header length");
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw TensorFileError(path.string() + ": truncated header");
  std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw TensorFileError(path.string() + ": invalid header JSON: " + e.what());
  }

  TensorFile file;
  for (const auto& [name, entry] : j.items()) {
    if (name == "__metadata__") {
      for (const auto& [k, v] : entry.items()) file.metadata[k] = v.get<std::string>();
      continue;
    }
    const std::string dtype = entry.at("dtype").get<std::string>();
    TensorRecord t;
    t.shape = entry.at("shape").get<std::vector<std::int64_t>>();
    const auto offsets = entry.at("data_offsets").get<std::vector<std::uint64_t>>();
    const std::size_t width = dtype_size(dtype);
    const auto n = static_cast<std::size_t>(t.numel());
    if (offsets.size() != 2 || offsets[1] < offsets[0] || offsets[1] > payload.size() ||
        offsets[1] - offsets[0] != n * width) {
      throw TensorFileError(path.string() + ": bad data offsets for " + name);
    }
    const char* src = payload.data() + offsets[0];
    t.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (dtype == "F32") {
        std::memcpy(&t.data[i], src + 4 * i, 4);
      } else if (dtype == "F64") {
        double d;
        std::memcpy(&d, src + 8 * i, 8);
        t.data[i] = static_cast<float>(d);
      } else {
        std::uint16_t h;
        std::memcpy(&h, src + 2 * i, 2);
        t.data[i] = dtype == "F16" ? half_to_float(h)
                                   : std::bit_cast<float>(static_cast<std::uint32_t>(h) << 16);
      }
    }
    file.tensors.emplace(name, std::move(t));
  }
  return file;
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file) {
  nlohmann::json header = nlohmann::json::object();
  if (!file.metadata.empty()) header["__metadata__"] = file.metadata;
  std::uint64_t offset = 0;
  for (const auto& [name, t] : file.tensors) {
    if (static_cast<std::int64_t>(t.data.size()) != t.numel()) {
      throw TensorFileError("tensor " + name + " has inconsistent shape");
    }
    const std::uint64_t bytes = t.data.size() * sizeof(float);
    header[name] = {{"dtype", "F32"}, {"shape", t.shape}, {"data_offsets", {offset, offset + bytes}}};
    offset += bytes;
  }
  std::string text = header.dump();
  while (text.size() % 8 != 0) text.push_back(' ');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TensorFileError("cannot write " + path.string());
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, t] : file.tensors) {
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!out) throw TensorFileError("write failed for " + path.string());
}

}  // namespace bnhate::nn
