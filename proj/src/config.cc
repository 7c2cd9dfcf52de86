/* Copyright 2026 The GLQA Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "glqa/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace glqa {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseInt(const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + v +
                                "'");
  }
  return out;
}

double ParseDouble(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define GLQA_STRING(name, field)                                         \
  Entry {                                                                \
    name, [](RunConfig& c, const std::string& v) { c.field = v; },       \
        [](const RunConfig& c) { return c.field; }                       \
  }
#define GLQA_SIZE(name, field)                                           \
  Entry {                                                                \
    name,                                                                \
        [](RunConfig& c, const std::string& v) {                         \
          c.field = ParseInt<std::size_t>(v);                            \
        },                                                               \
        [](const RunConfig& c) { return std::to_string(c.field); }       \
  }
#define GLQA_DOUBLE(name, field)                                         \
  Entry {                                                                \
    name,                                                                \
        [](RunConfig& c, const std::string& v) {                         \
          c.field = ParseDouble(v);                                      \
        },                                                               \
        [](const RunConfig& c) { return FormatDouble(c.field); }         \
  }

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      GLQA_STRING("data", data),
      GLQA_STRING("out", out),
      GLQA_STRING("history", history),
      GLQA_STRING("embeddings", embeddings),
      GLQA_SIZE("max_vocab", max_vocab),
      Entry{"min_count",
            [](RunConfig& c, const std::string& v) {
              c.min_count = ParseInt<int>(v);
            },
            [](const RunConfig& c) { return std::to_string(c.min_count); }},
      GLQA_SIZE("embed_dim", model.embed_dim),
      GLQA_SIZE("hidden_dim", model.hidden_dim),
      GLQA_SIZE("tf_dim", model.tf_dim),
      GLQA_SIZE("local_dim", model.local_dim),
      GLQA_SIZE("proj_dim", model.proj_dim),
      GLQA_DOUBLE("alpha", model.alpha),
      GLQA_DOUBLE("beta", model.beta),
      GLQA_SIZE("max_len", model.max_len),
      Entry{"head",
            [](RunConfig& c, const std::string& v) {
              c.model.head = ParseHead(v);
            },
            [](const RunConfig& c) { return std::string(HeadName(c.model.head)); }},
      Entry{"tf_mode",
            [](RunConfig& c, const std::string& v) {
              c.model.tf_mode = ParseTfMode(v);
            },
            [](const RunConfig& c) {
              return std::string(TfModeName(c.model.tf_mode));
            }},
      GLQA_DOUBLE("margin", train.margin),
      GLQA_DOUBLE("learning_rate", train.learning_rate),
      GLQA_DOUBLE("adam_beta1", train.beta1),
      GLQA_DOUBLE("adam_beta2", train.beta2),
      GLQA_DOUBLE("adam_epsilon", train.epsilon),
      GLQA_SIZE("epochs", train.epochs),
      GLQA_SIZE("batch_size", train.batch_size),
      GLQA_DOUBLE("keep_prob", train.keep_prob),
      GLQA_SIZE("patience", train.patience),
      Entry{"seed",
            [](RunConfig& c, const std::string& v) {
              c.train.seed = ParseInt<std::uint64_t>(v);
            },
            [](const RunConfig& c) { return std::to_string(c.train.seed); }},
      GLQA_SIZE("pool_k", pool_k),
      GLQA_SIZE("valid_stride", valid_stride),
      GLQA_SIZE("threads", threads),
  };
  return entries;
}

#undef GLQA_STRING
#undef GLQA_SIZE
#undef GLQA_DOUBLE

}  // namespace

void RunConfig::SetKey(const std::string& key, const std::string& value,
                       const std::string& where) {
  for (const Entry& e : Entries()) {
    if (key != e.key) continue;
    try {
      e.set(*this, value);
    } catch (const std::exception& ex) {
      throw ConfigError(where + ": bad value for key '" + key + "': " +
                        ex.what());
    }
    return;
  }
  throw ConfigError(where + ": unknown key '" + key + "'");
}

void RunConfig::Parse(std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + trimmed +
                        "'");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key before '='");
    SetKey(key, Trim(std::string_view(trimmed).substr(eq + 1)), where);
  }
}

void RunConfig::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Parse(ss.str(), path.string());
}

void RunConfig::Set(std::string_view assignment, const std::string& source) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(source + ": expected key=value, got '" +
                      std::string(assignment) + "'");
  }
  SetKey(Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)),
         source);
}

std::string RunConfig::Dump() const {
  std::string out;
  for (const Entry& e : Entries()) {
    out += e.key;
    out += " = ";
    out += e.get(*this);
    out += '\n';
  }
  return out;
}

std::vector<std::string> RunConfig::Keys() {
  std::vector<std::string> keys;
  for (const Entry& e : Entries()) keys.emplace_back(e.key);
  return keys;
}

void RunConfig::Validate() const {
  auto positive = [](std::size_t v, const char* key) {
    if (v == 0) throw ConfigError(std::string("config: ") + key + " must be >= 1");
  };
  positive(model.embed_dim, "embed_dim");
  positive(model.hidden_dim, "hidden_dim");
  positive(model.tf_dim, "tf_dim");
  positive(model.local_dim, "local_dim");
  positive(model.proj_dim, "proj_dim");
  positive(model.max_len, "max_len");
  positive(max_vocab, "max_vocab");
  positive(pool_k, "pool_k");
  positive(valid_stride, "valid_stride");
  positive(train.batch_size, "batch_size");
  if (max_vocab <= kNumReserved) {
    throw ConfigError("config: max_vocab must exceed the reserved ids");
  }
  if (!(model.alpha > 0.0)) throw ConfigError("config: alpha must be > 0");
  if (!(model.beta > 0.0)) throw ConfigError("config: beta must be > 0");
  try {
    train.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace glqa
