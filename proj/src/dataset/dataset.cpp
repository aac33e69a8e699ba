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

#include "bnhate/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "bnhate/rng.hpp"

namespace bnhate::dataset {
namespace {

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

std::vector<Example> parse_dataset(std::istream& in, const std::string& source,
                                   const LabelScheme& scheme) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw DatasetError(DatasetError::Kind::kMalformedRow, where(source, 1) + ": missing header");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Tolerate a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "id\ttext\tlabel") {
    throw DatasetError(DatasetError::Kind::kMalformedRow,
                       where(source, 1) + ": header must be 'id<TAB>text<TAB>label'");
  }

  std::vector<Example> out;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos || t1 == 0) {
      throw DatasetError(DatasetError::Kind::kMalformedRow,
                         where(source, line_no) + ": malformed row (expected 3 tab-separated fields)");
    }
    Example ex;
    ex.id = line.substr(0, t1);
    ex.text = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string label = line.substr(t2 + 1);
    const auto id = scheme.id(label);
    if (!id) {
      throw DatasetError(DatasetError::Kind::kUnknownLabel,
                         where(source, line_no) + ": unknown label '" + label + "' for subtask " +
                             to_string(scheme.subtask()));
    }
    ex.label = *id;
    if (!seen.insert(ex.id).second) {
      throw DatasetError(DatasetError::Kind::kDuplicateId,
                         where(source, line_no) + ": duplicate id '" + ex.id + "'");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<Example> load_dataset(const std::filesystem::path& path, const LabelScheme& scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetError::Kind::kIo, "cannot open dataset " + path.string());
  return parse_dataset(in, path.string(), scheme);
}

std::vector<TextRow> parse_texts(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DatasetError(DatasetError::Kind::kMalformedRow, where(source, 1) + ": missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::size_t fields = 0;
  if (line == "id\ttext") {
    fields = 2;
  } else if (line == "id\ttext\tlabel") {
    fields = 3;
  } else {
    throw DatasetError(DatasetError::Kind::kMalformedRow,
                       where(source, 1) + ": header must be 'id<TAB>text' or 'id<TAB>text<TAB>label'");
  }
  std::vector<TextRow> out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t1 = line.find('\t');
    const auto n_tabs = static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
    if (n_tabs != fields - 1 || t1 == 0) {
      throw DatasetError(DatasetError::Kind::kMalformedRow,
                         where(source, line_no) + ": malformed row (expected " + std::to_string(fields) +
                             " tab-separated fields)");
    }
    const auto t2 = line.find('\t', t1 + 1);
    TextRow row{line.substr(0, t1), line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1)};
    if (!seen.insert(row.id).second) {
      throw DatasetError(DatasetError::Kind::kDuplicateId,
                         where(source, line_no) + ": duplicate id '" + row.id + "'");
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<TextRow> load_texts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetError::Kind::kIo, "cannot open input " + path.string());
  return parse_texts(in, path.string());
}

void write_dataset(std::ostream& out, const std::vector<Example>& data, const LabelScheme& scheme) {
  out << "id\ttext\tlabel\n";
  for (const Example& ex : data) out << ex.id << '\t' << ex.text << '\t' << scheme.name(ex.label) << '\n';
}

void save_dataset(const std::filesystem::path& path, const std::vector<Example>& data,
                  const LabelScheme& scheme) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(DatasetError::Kind::kIo, "cannot write " + path.string());
  write_dataset(out, data, scheme);
  if (!out) throw DatasetError(DatasetError::Kind::kIo, "write failed for " + path.string());
}

ClassDistribution distribution(const std::vector<Example>& data, const LabelScheme& scheme) {
  if (data.empty()) throw DatasetError(DatasetError::Kind::kEmptyDataset, "dataset is empty");
  ClassDistribution dist;
  dist.counts.assign(scheme.size(), 0);
  for (const Example& ex : data) ++dist.counts.at(static_cast<std::size_t>(ex.label));
  dist.total = data.size();
  dist.fractions.reserve(scheme.size());
  for (std::size_t c : dist.counts) {
    dist.fractions.push_back(static_cast<double>(c) / static_cast<double>(dist.total));
  }
  return dist;
}

nlohmann::ordered_json distribution_json(const ClassDistribution& dist, const LabelScheme& scheme) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < scheme.size(); ++c) {
    j[scheme.names()[c]] = {{"count", dist.counts[c]}, {"fraction", dist.fractions[c]}};
  }
  return j;
}

std::string format_distribution(const ClassDistribution& dist, const LabelScheme& scheme) {
  std::size_t width = 5;
  for (const auto& n : scheme.names()) width = std::max(width, n.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "class" << "  " << std::right
     << std::setw(8) << "count" << "  " << std::setw(8) << "percent" << '\n';
  for (std::size_t c = 0; c < scheme.size(); ++c) {
    os << std::left << std::setw(static_cast<int>(width)) << scheme.names()[c] << "  " << std::right
       << std::setw(8) << dist.counts[c] << "  " << std::setw(7) << std::fixed
       << std::setprecision(2) << 100.0 * dist.fractions[c] << "%\n";
  }
  os << std::left << std::setw(static_cast<int>(width)) << "total" << "  " << std::right
     << std::setw(8) << dist.total << '\n';
  return os.str();
}

Split stratified_split(const std::vector<Example>& data, const LabelScheme& scheme,
                       const SplitSpec& spec) {
  if (!(spec.dev_fraction > 0.0 && spec.dev_fraction < 1.0)) {
    throw std::invalid_argument("dev_fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> members(scheme.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    members.at(static_cast<std::size_t>(data[i].label)).push_back(i);
  }

  std::vector<char> in_dev(data.size(), 0);
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& idx = members[c];
    if (idx.empty()) continue;
    std::size_t n_dev = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * spec.dev_fraction));
    if (idx.size() >= 2) n_dev = std::max<std::size_t>(n_dev, 1);
    if (n_dev >= idx.size()) {
      throw DatasetError(DatasetError::Kind::kEmptyClass,
                         "class '" + scheme.names()[c] + "' would leave no training examples");
    }
    Rng rng(derive_seed(spec.seed, {static_cast<std::uint64_t>(c)}));
    rng.shuffle(std::span<std::size_t>(idx));
    for (std::size_t k = 0; k < n_dev; ++k) in_dev[idx[k]] = 1;
  }

  Split split;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (in_dev[i] ? split.dev : split.train).push_back(data[i]);
  }
  return split;
}

std::vector<double> class_weights(const ClassDistribution& dist, const LabelScheme& scheme) {
  const std::size_t k = dist.counts.size();
  std::vector<double> w(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (dist.counts[c] == 0) {
      throw DatasetError(DatasetError::Kind::kZeroCount,
                         "class '" + scheme.names().at(c) + "' has no examples");
    }
    w[c] = static_cast<double>(dist.total) / (static_cast<double>(k) * static_cast<double>(dist.counts[c]));
  }
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(k);
  for (double& x : w) x /= mean;
  return w;
}

}  // namespace bnhate::dataset
