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

#include "bnhate/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bnhate::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& origin, std::string_view key, std::string_view value,
                      const std::string& expected) {
  throw ConfigError(origin + ": " + std::string(key) + " = '" + std::string(value) + "': expected " + expected);
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v, const std::string& origin) {
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(origin, key, v, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view v, const std::string& origin) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(origin, key, v, "a real number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v, const std::string& origin) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad(origin, key, v, "true or false");
}

std::vector<std::int64_t> parse_int_list(std::string_view key, std::string_view v, const std::string& origin) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (item.empty()) bad(origin, key, v, "a comma-separated list of integers");
    out.push_back(parse_int<std::int64_t>(key, item, origin));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt_real(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

#define BNHATE_INT_FIELD(KEY, MEMBER, TYPE)                                                  \
  Field {                                                                                    \
    KEY, [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {    \
      c.MEMBER = parse_int<TYPE>(k, v, o);                                                   \
    },                                                                                       \
        [](const RunConfig& c) { return std::to_string(c.MEMBER); }                          \
  }
#define BNHATE_REAL_FIELD(KEY, MEMBER)                                                       \
  Field {                                                                                    \
    KEY, [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {    \
      c.MEMBER = parse_real(k, v, o);                                                        \
    },                                                                                       \
        [](const RunConfig& c) { return fmt_real(c.MEMBER); }                                \
  }
#define BNHATE_BOOL_FIELD(KEY, MEMBER)                                                       \
  Field {                                                                                    \
    KEY, [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {    \
      c.MEMBER = parse_bool(k, v, o);                                                        \
    },                                                                                       \
        [](const RunConfig& c) { return std::string(c.MEMBER ? "true" : "false"); }          \
  }
#define BNHATE_PATH_FIELD(KEY, MEMBER)                                                                \
  Field {                                                                                             \
    KEY, [](RunConfig& c, std::string_view, std::string_view v, const std::string&) { c.MEMBER = v; }, \
        [](const RunConfig& c) { return c.MEMBER.string(); }                                          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      BNHATE_INT_FIELD("model.d_embed", model.d_embed, std::int64_t),
      BNHATE_INT_FIELD("model.gru_layers", model.gru_layers, std::int64_t),
      BNHATE_INT_FIELD("model.gru_hidden", model.gru_hidden, std::int64_t),
      BNHATE_INT_FIELD("model.attn_heads", model.attn_heads, std::int64_t),
      Field{"model.cnn_kernels",
            [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {
              c.model.cnn_kernels = parse_int_list(k, v, o);
            },
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.model.cnn_kernels.size(); ++i) {
                s += (i ? ", " : "") + std::to_string(c.model.cnn_kernels[i]);
              }
              return s;
            }},
      BNHATE_INT_FIELD("model.cnn_filters", model.cnn_filters, std::int64_t),
      BNHATE_INT_FIELD("model.fusion_dim", model.fusion_dim, std::int64_t),
      BNHATE_REAL_FIELD("model.dropout", model.dropout),
      BNHATE_INT_FIELD("model.seed", model.seed, std::uint64_t),

      BNHATE_INT_FIELD("training.batch_size", training.batch_size, int),
      BNHATE_REAL_FIELD("training.learning_rate", training.learning_rate),
      BNHATE_INT_FIELD("training.max_epochs", training.max_epochs, int),
      BNHATE_INT_FIELD("training.patience", training.patience, int),
      BNHATE_REAL_FIELD("training.grad_clip_norm", training.grad_clip_norm),
      BNHATE_BOOL_FIELD("training.use_class_weights", training.use_class_weights),
      BNHATE_INT_FIELD("training.seed", training.seed, std::uint64_t),
      BNHATE_REAL_FIELD("training.beta1", training.beta1),
      BNHATE_REAL_FIELD("training.beta2", training.beta2),
      BNHATE_REAL_FIELD("training.adam_eps", training.adam_eps),
      BNHATE_REAL_FIELD("training.weight_decay", training.weight_decay),

      Field{"encoder.kind",
            [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {
              const auto kind = encoder::parse_encoder_kind(v);
              if (!kind) bad(o, k, v, "pretrained or stub");
              c.encoder.kind = *kind;
            },
            [](const RunConfig& c) { return encoder::to_string(c.encoder.kind); }},
      Field{"encoder.identifier",
            [](RunConfig& c, std::string_view, std::string_view v, const std::string&) {
              c.encoder.identifier = v;
              c.encoder_identifier_set = true;
            },
            [](const RunConfig& c) { return c.encoder.identifier; }},
      BNHATE_PATH_FIELD("encoder.weights_dir", encoder.weights_dir),
      BNHATE_BOOL_FIELD("encoder.trainable", encoder.trainable),
      BNHATE_INT_FIELD("encoder.max_seq_len", encoder.max_seq_len, int),
      BNHATE_INT_FIELD("encoder.stub_vocab_size", encoder.stub_vocab_size, encoder::TokenId),

      BNHATE_PATH_FIELD("data.train", data.train),
      BNHATE_PATH_FIELD("data.dev", data.dev),
      BNHATE_REAL_FIELD("data.dev_fraction", data.dev_fraction),
      BNHATE_INT_FIELD("data.split_seed", data.split_seed, std::uint64_t),
      BNHATE_PATH_FIELD("data.resources", data.resources),
      BNHATE_PATH_FIELD("data.lexicon", data.lexicon),

      BNHATE_PATH_FIELD("run.output_dir", run.output_dir),
      Field{"run.subtask",
            [](RunConfig& c, std::string_view k, std::string_view v, const std::string& o) {
              const auto s = dataset::parse_subtask(v);
              if (!s) bad(o, k, v, "1A or 1B");
              c.run.subtask = *s;
            },
            [](const RunConfig& c) { return dataset::to_string(c.run.subtask); }},
  };
  return table;
}

#undef BNHATE_INT_FIELD
#undef BNHATE_REAL_FIELD
#undef BNHATE_BOOL_FIELD
#undef BNHATE_PATH_FIELD

// `run.seed` is write-only shorthand for the three seeds.
constexpr std::string_view kSeedShorthand = "run.seed";

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    k.emplace_back(kSeedShorthand);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, const std::string& origin) {
  value = trim(value);
  if (key == kSeedShorthand) {
    const auto seed = parse_int<std::uint64_t>(key, value, origin);
    cfg.model.seed = seed;
    cfg.training.seed = seed;
    cfg.data.split_seed = seed;
    return;
  }
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, key, value, origin);
      return;
    }
  }
  throw ConfigError(origin + ": unknown setting '" + std::string(key) + "'");
}

void apply_config(RunConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string origin = source + ":" + std::to_string(line_no);
    const auto s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(origin + ": malformed section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      if (section.empty()) throw ConfigError(origin + ": empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(origin + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(origin + ": setting outside of a [section]");
    const std::string key = section + "." + std::string(trim(s.substr(0, eq)));
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(origin + ": '" + key + "' already set on line " + std::to_string(it->second));
    }
    seen.emplace(key, line_no);
    apply_setting(cfg, key, s.substr(eq + 1), origin);
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::filesystem::filesystem_error("cannot open config file", path, std::make_error_code(std::errc::no_such_file_or_directory));
  apply_config(cfg, in, path.string());
}

void RunConfig::finalize() {
  model.num_labels = static_cast<std::int64_t>(dataset::LabelScheme::get(run.subtask).size());
  if (encoder.kind == encoder::EncoderKind::kStub && !encoder_identifier_set) {
    encoder.identifier = std::to_string(model.seed);
  }
  try {
    model.validate();
    training.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(data.dev_fraction > 0.0 && data.dev_fraction < 1.0)) {
    throw ConfigError("data.dev_fraction must lie in (0, 1)");
  }
  if (encoder.max_seq_len < 2) throw ConfigError("encoder.max_seq_len must be >= 2");
  if (encoder.stub_vocab_size < 16) throw ConfigError("encoder.stub_vocab_size must be >= 16");
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    j[f.key.substr(0, dot)][f.key.substr(dot + 1)] = f.get(cfg);
  }
  return j;
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      os << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    os << f.key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

}  // namespace bnhate::cli
