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
#include "glqa/synthetic.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "glqa/rng.h"

namespace glqa {
namespace {

constexpr std::array<std::string_view, 10> kQuestionWords = {
    "how", "what", "can", "does", "do", "i", "my", "is", "should", "when"};

std::size_t ParseCount(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw std::invalid_argument("synthetic spec: '" + std::string(key) +
                                "' needs a non-negative integer, got '" +
                                std::string(value) + "'");
  }
  return out;
}

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

SyntheticSpec SyntheticSpec::Parse(std::string_view text) {
  SyntheticSpec spec;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("synthetic spec: expected key=value, got '" +
                                  std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "vocab" || key == "v") {
      spec.vocab_size = ParseCount(key, value);
    } else if (key == "train") {
      spec.train = ParseCount(key, value);
    } else if (key == "valid") {
      spec.valid = ParseCount(key, value);
    } else if (key == "test") {
      spec.test = ParseCount(key, value);
    } else if (key == "answer_len" || key == "len") {
      spec.answer_len = ParseCount(key, value);
    } else if (key == "k" || key == "pool_size") {
      spec.pool_size = ParseCount(key, value);
    } else if (key == "topics") {
      spec.topics = ParseCount(key, value);
    } else if (key == "related") {
      spec.related = ParseCount(key, value);
    } else if (key == "seed") {
      spec.seed = ParseCount(key, value);
    } else {
      throw std::invalid_argument("synthetic spec: unknown key '" +
                                  std::string(key) + "'");
    }
  }
  return spec;
}

std::string SyntheticSpec::ToString() const {
  std::ostringstream os;
  os << "vocab=" << vocab_size << ",train=" << train << ",valid=" << valid
     << ",test=" << test << ",answer_len=" << answer_len << ",k=" << pool_size
     << ",topics=" << topics << ",related=" << related << ",seed=" << seed;
  return os.str();
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.vocab_size < 10) {
    throw std::invalid_argument("synthetic spec: vocab must be >= 10");
  }
  if (spec.answer_len < 1) {
    throw std::invalid_argument("synthetic spec: answer_len must be >= 1");
  }
  if (spec.pool_size < 1) {
    throw std::invalid_argument("synthetic spec: k must be >= 1");
  }
  const std::size_t v = spec.vocab_size;
  const std::size_t n_topics =
      spec.topics != 0 ? spec.topics : std::max<std::size_t>(2, v / 10);
  const std::size_t n_qwords =
      std::clamp<std::size_t>(v / 20, 1, kQuestionWords.size());
  if (n_topics < 2) {
    throw std::invalid_argument("synthetic spec: need at least 2 topics");
  }
  if (n_topics + n_qwords + 1 > v) {
    throw std::invalid_argument(
        "synthetic spec: " + std::to_string(n_topics) +
        " topics do not fit a vocabulary of " + std::to_string(v) + " words");
  }
  const std::size_t related = std::min(
      {spec.related, (v - n_qwords - n_topics - 1) / n_topics,
       spec.answer_len - 1});
  const std::size_t n_filler = v - n_qwords - n_topics * (1 + related);

  SyntheticCorpus out;
  std::vector<std::string> qwords(kQuestionWords.begin(),
                                  kQuestionWords.begin() +
                                      static_cast<std::ptrdiff_t>(n_qwords));
  std::vector<std::vector<std::string>> topic_related(n_topics);
  for (std::size_t t = 0; t < n_topics; ++t) {
    out.keywords.push_back("topic" + std::to_string(t));
    for (std::size_t r = 0; r < related; ++r) {
      topic_related[t].push_back("topic" + std::to_string(t) + "rel" +
                                 std::to_string(r));
    }
  }
  std::vector<std::string> filler;
  for (std::size_t f = 0; f < n_filler; ++f) {
    filler.push_back("w" + std::to_string(f));
  }

  Rng rng(spec.seed, "synthetic");
  const std::size_t total = spec.train + spec.valid + spec.test;
  std::vector<std::size_t> topic_of(total);
  for (std::size_t i = 0; i < total; ++i) {
    const int id = static_cast<int>(i) + 1;
    const std::size_t topic = rng.Uniform(n_topics);
    topic_of[i] = topic;
    out.question_topic[id] = topic;
    out.answer_topic[id] = topic;

    std::vector<std::string> q;
    const std::size_t n_q = 4 + rng.Uniform(5);
    for (std::size_t k = 0; k < n_q; ++k) q.push_back(qwords[rng.Uniform(n_qwords)]);
    q.insert(q.begin() + static_cast<std::ptrdiff_t>(rng.Uniform(n_q + 1)),
             out.keywords[topic]);
    q.back() += "?";

    std::vector<std::string> a(spec.answer_len);
    std::vector<std::size_t> slots(spec.answer_len);
    for (std::size_t k = 0; k < slots.size(); ++k) slots[k] = k;
    rng.Shuffle(slots);
    a[slots[0]] = out.keywords[topic];
    for (std::size_t r = 0; r < related; ++r) a[slots[1 + r]] = topic_related[topic][r];
    for (auto& w : a)
      if (w.empty()) w = filler[rng.Uniform(n_filler)];

    Split split = i < spec.train                ? Split::kTrain
                  : i < spec.train + spec.valid ? Split::kValid
                                                : Split::kTest;
    out.file.answers.push_back({id, Join(a)});
    out.file.questions.push_back({id, Join(q), {id}, split, {}});
  }

  for (std::size_t i = 0; i < total; ++i) {
    std::vector<int> others;
    for (std::size_t j = 0; j < total; ++j) {
      if (topic_of[j] != topic_of[i]) others.push_back(static_cast<int>(j) + 1);
    }
    if (others.size() < spec.pool_size - 1) {
      throw std::invalid_argument(
          "synthetic spec: only " + std::to_string(others.size()) +
          " other-topic answers for a pool of " +
          std::to_string(spec.pool_size));
    }
    // Partial Fisher-Yates: the first k-1 entries are a uniform sample.
    for (std::size_t k = 0; k + 1 < spec.pool_size; ++k) {
      std::swap(others[k], others[k + rng.Uniform(others.size() - k)]);
    }
    std::vector<int> pool(others.begin(),
                          others.begin() +
                              static_cast<std::ptrdiff_t>(spec.pool_size - 1));
    pool.push_back(static_cast<int>(i) + 1);
    std::sort(pool.begin(), pool.end());
    out.file.questions[i].pool = std::move(pool);
  }
  return out;
}

}  // namespace glqa
