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
#ifndef GLQA_TEXT_H_
#define GLQA_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glqa/tensor.h"

namespace glqa {

inline constexpr int kUnkId = 0;
inline constexpr int kPadId = 1;
inline constexpr int kNumReserved = 2;
inline constexpr std::size_t kDefaultMaxVocab = 50000;

// Lowercases ASCII, splits on whitespace and strips leading/trailing
// punctuation from every token. Tokens that become empty are dropped.
std::vector<std::string> Tokenize(std::string_view text);

using TokenSequence = std::vector<int>;

// Word <-> id mapping. Ids 0 and 1 are reserved for UNK and PAD; every
// other word owns exactly one id in [2, size()).
class Vocabulary {
 public:
  Vocabulary() = default;

  // Keeps tokens seen at least `min_count` times, ordered by descending
  // frequency with lexicographic tie-break, truncated so that size() never
  // exceeds `max_size`. Throws std::invalid_argument("empty corpus").
  static Vocabulary Build(const std::vector<std::vector<std::string>>& corpus,
                          int min_count = 1,
                          std::size_t max_size = kDefaultMaxVocab);

  // `words[k]` receives id k + 2. Throws on duplicates or empty words.
  static Vocabulary FromWords(std::vector<std::string> words);

  // One word per line; line L (1-based) holds id L + 1.
  static Vocabulary Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  int Id(std::string_view word) const;
  const std::string& Word(int id) const;
  std::size_t size() const { return words_.size() + kNumReserved; }
  // Non-reserved words in id order.
  const std::vector<std::string>& words() const { return words_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_;
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// In-vocabulary tokens map to their id, everything else to UNK.
TokenSequence Encode(const Vocabulary& vocab,
                     std::span<const std::string> tokens);
std::vector<std::string> Decode(const Vocabulary& vocab,
                                std::span<const int> ids);

enum class TfMode { kBinary, kCounts };

std::string_view TfModeName(TfMode mode);  // "binary" or "counts"
TfMode ParseTfMode(std::string_view name);

// Sparse term-frequency vector over a vocabulary of `dimension` ids.
// `ids` is sorted and distinct; UNK and PAD never appear.
struct TfVector {
  std::size_t dimension = 0;
  std::vector<int> ids;
  std::vector<double> weights;

  Tensor Dense() const;  // 1 x dimension
  bool empty() const { return ids.empty(); }
  friend bool operator==(const TfVector&, const TfVector&) = default;
};

TfVector MakeTfVector(std::size_t vocab_size, std::span<const int> seq,
                      TfMode mode = TfMode::kBinary);
inline TfVector MakeTfVector(const Vocabulary& vocab, std::span<const int> seq,
                             TfMode mode = TfMode::kBinary) {
  return MakeTfVector(vocab.size(), seq, mode);
}

}  // namespace glqa

#endif  // GLQA_TEXT_H_
