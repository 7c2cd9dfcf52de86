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
#ifndef GLQA_CONFIG_H_
#define GLQA_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glqa/model.h"
#include "glqa/training.h"

namespace glqa {

// Malformed config input. The message names the source (file and line, or
// "--set") and the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // Paths.
  std::string data;
  std::string out;
  std::string history;
  std::string embeddings;  // optional pre-trained vectors, "word v1 v2 ..."

  // Vocabulary.
  std::size_t max_vocab = kDefaultMaxVocab;
  int min_count = 1;

  ModelConfig model;  // vocab_size is filled in from the built vocabulary
  TrainConfig train;

  std::size_t pool_k = 500;
  // Every n-th training question is held out for validation when the
  // dataset has no validation split.
  std::size_t valid_stride = 10;
  // OpenMP threads; 0 leaves the runtime default.
  std::size_t threads = 0;

  // Applies "key = value" lines; '#' starts a comment.
  void LoadFile(const std::filesystem::path& path);
  void Parse(std::string_view text, const std::string& source);
  // One "key=value" override.
  void Set(std::string_view assignment, const std::string& source = "--set");
  void SetKey(const std::string& key, const std::string& value,
              const std::string& where);

  // Every key with its current value, defaults included, one per line.
  std::string Dump() const;
  static std::vector<std::string> Keys();

  void Validate() const;
};

}  // namespace glqa

#endif  // GLQA_CONFIG_H_
