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
#include "glqa/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>

namespace glqa {
namespace {

const std::string kUnkWord = "<unk>";
const std::string kPadWord = "<pad>";

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && IsPunct(text[b])) ++b;
    while (e > b && IsPunct(text[e - 1])) --e;
    if (b < e) {
      std::string tok(text.substr(b, e - b));
      for (char& c : tok) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

Vocabulary Vocabulary::Build(
    const std::vector<std::vector<std::string>>& corpus, int min_count,
    std::size_t max_size) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::map<std::string, long> freq;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++freq[tok];
  std::vector<std::pair<std::string, long>> kept;
  for (auto& [w, n] : freq)
    if (n >= min_count) kept.emplace_back(w, n);
  // std::map iteration is already lexicographic; stable sort keeps that
  // order among equal frequencies.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t cap =
      max_size > kNumReserved ? max_size - kNumReserved : 0;
  if (kept.size() > cap) kept.resize(cap);
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [w, n] : kept) words.push_back(w);
  return FromWords(std::move(words));
}

Vocabulary Vocabulary::FromWords(std::vector<std::string> words) {
  Vocabulary v;
  v.index_.reserve(words.size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    const std::string& w = words[k];
    if (w.empty() || w == kUnkWord || w == kPadWord) {
      throw std::invalid_argument("vocabulary: invalid word '" + w + "'");
    }
    if (!v.index_.emplace(w, static_cast<int>(k) + kNumReserved).second) {
      throw std::invalid_argument("vocabulary: duplicate word '" + w + "'");
    }
  }
  v.words_ = std::move(words);
  return v;
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    words.push_back(line);
  }
  try {
    return FromWords(std::move(words));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary " + path.string());
  for (const auto& w : words_) out << w << '\n';
}

int Vocabulary::Id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::Word(int id) const {
  if (id == kUnkId) return kUnkWord;
  if (id == kPadId) return kPadWord;
  if (id < kNumReserved || static_cast<std::size_t>(id) >= size()) {
    throw std::out_of_range("vocabulary: id " + std::to_string(id));
  }
  return words_[static_cast<std::size_t>(id - kNumReserved)];
}

TokenSequence Encode(const Vocabulary& vocab,
                     std::span<const std::string> tokens) {
  TokenSequence ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.Id(t));
  return ids;
}

std::vector<std::string> Decode(const Vocabulary& vocab,
                                std::span<const int> ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(vocab.Word(id));
  return out;
}

Tensor TfVector::Dense() const {
  Tensor t(1, dimension);
  for (std::size_t k = 0; k < ids.size(); ++k) t[ids[k]] = weights[k];
  return t;
}

TfVector MakeTfVector(std::size_t vocab_size, std::span<const int> seq,
                      TfMode mode) {
  std::map<int, double> counts;
  for (int id : seq) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
      throw std::out_of_range("tf_vector: id " + std::to_string(id) +
                              " outside vocabulary of size " +
                              std::to_string(vocab_size));
    }
    if (id == kUnkId || id == kPadId) continue;
    counts[id] += 1.0;
  }
  TfVector tf;
  tf.dimension = vocab_size;
  for (auto [id, n] : counts) {
    tf.ids.push_back(id);
    tf.weights.push_back(mode == TfMode::kBinary ? 1.0 : n);
  }
  return tf;
}

std::string_view TfModeName(TfMode mode) {
  return mode == TfMode::kBinary ? "binary" : "counts";
}

TfMode ParseTfMode(std::string_view name) {
  if (name == "binary") return TfMode::kBinary;
  if (name == "counts") return TfMode::kCounts;
  throw std::invalid_argument("unknown tf mode '" + std::string(name) +
                              "' (expected binary or counts)");
}

}  // namespace glqa
