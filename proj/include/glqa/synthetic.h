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
#ifndef GLQA_SYNTHETIC_H_
#define GLQA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "glqa/dataset.h"

namespace glqa {

// Shape of a generated keyword corpus.
//
// The vocabulary is split into question words, one keyword plus `related`
// companion words per topic, and filler. Each question mentions its topic
// keyword among 4-8 question words. Its answer is `answer_len` tokens of
// uniform filler with the keyword and the topic's related words dropped in
// at random positions. Every question gets a stored pool of `pool_size`
// candidates whose distractors all come from other topics.
struct SyntheticSpec {
  std::size_t vocab_size = 200;
  std::size_t train = 500;
  std::size_t valid = 0;
  std::size_t test = 100;
  std::size_t answer_len = 40;
  std::size_t pool_size = 10;
  std::size_t topics = 0;  // 0 picks max(2, vocab_size / 10)
  std::size_t related = 2;
  std::uint64_t seed = 1;

  // "vocab=200,train=500,test=100,answer_len=40,k=10,seed=1"; unknown keys
  // throw std::invalid_argument.
  static SyntheticSpec Parse(std::string_view text);
  std::string ToString() const;
};

struct SyntheticCorpus {
  DatasetFile file;
  std::vector<std::string> keywords;            // indexed by topic
  std::map<int, std::size_t> question_topic;    // question id -> topic
  std::map<int, std::size_t> answer_topic;      // answer id -> topic
};

// Deterministic in `spec`. Throws std::invalid_argument when the
// vocabulary cannot hold the requested topics or the pools cannot be
// filled from other topics.
SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace glqa

#endif  // GLQA_SYNTHETIC_H_
