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
#include "glqa/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

#include "glqa/encoder.h"
#include "glqa/scoring.h"

namespace glqa {
namespace {

// Runs body(i) for i in [0, n), serially or across OpenMP threads, and
// rethrows the first exception raised by any iteration.
template <typename Body>
void ForEach(std::size_t n, Execution exec, Body body) {
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string EscapeHtml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

void CandidatePool::Validate() const {
  if (candidates.empty()) throw std::invalid_argument("empty candidate pool");
  if (correct.empty()) throw std::invalid_argument("pool has no correct answer");
  std::set<int> ids(candidates.begin(), candidates.end());
  if (ids.size() != candidates.size()) {
    throw std::invalid_argument("pool has duplicate candidates");
  }
  for (int c : correct) {
    if (!ids.count(c)) {
      throw std::invalid_argument("correct answer " + std::to_string(c) +
                                  " missing from pool");
    }
  }
}

RankedPool RankByScores(const CandidatePool& pool,
                        std::span<const double> scores) {
  if (scores.size() != pool.candidates.size()) {
    throw std::invalid_argument("rank: score count does not match pool size");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return pool.candidates[a] < pool.candidates[b];
  });
  RankedPool out;
  out.question_id = pool.question_id;
  const std::set<int> correct(pool.correct.begin(), pool.correct.end());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const int id = pool.candidates[order[r]];
    out.ids.push_back(id);
    out.scores.push_back(scores[order[r]]);
    if (out.best_correct_rank == 0 && correct.count(id)) {
      out.best_correct_rank = r + 1;
    }
  }
  return out;
}

double PrecisionAt1(std::span<const RankedPool> results) {
  if (results.empty()) throw std::invalid_argument("P@1 of no pools");
  std::size_t hits = 0;
  for (const auto& r : results) hits += r.best_correct_rank == 1 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double MeanReciprocalRank(std::span<const RankedPool> results) {
  if (results.empty()) throw std::invalid_argument("MRR of no pools");
  double s = 0.0;
  for (const auto& r : results) {
    if (r.best_correct_rank == 0) {
      throw std::invalid_argument("MRR of a pool without a correct answer");
    }
    s += 1.0 / static_cast<double>(r.best_correct_rank);
  }
  return s / static_cast<double>(results.size());
}

std::vector<CandidatePool> BuildPools(const Dataset& data, Split split,
                                      std::size_t k, Rng& rng) {
  const auto& answers = data.answers();
  if (answers.size() < k) {
    throw DataError("answer store has " + std::to_string(answers.size()) +
                    " answers, fewer than pool size " + std::to_string(k));
  }
  std::vector<CandidatePool> pools;
  for (const auto* q : data.questions(split)) {
    CandidatePool pool;
    pool.question_id = q->id;
    pool.correct = q->correct;
    const std::set<int> correct(q->correct.begin(), q->correct.end());
    std::vector<int> rest;
    rest.reserve(answers.size());
    for (const auto& a : answers)
      if (!correct.count(a.id)) rest.push_back(a.id);
    const std::size_t n_distractors =
        k > correct.size() ? std::min(k - correct.size(), rest.size()) : 0;
    for (std::size_t i = 0; i < n_distractors; ++i) {
      std::swap(rest[i], rest[i + rng.Uniform(rest.size() - i)]);
    }
    pool.candidates.assign(correct.begin(), correct.end());
    pool.candidates.insert(pool.candidates.end(), rest.begin(),
                           rest.begin() + static_cast<std::ptrdiff_t>(n_distractors));
    std::sort(pool.candidates.begin(), pool.candidates.end());
    pools.push_back(std::move(pool));
  }
  return pools;
}

std::vector<CandidatePool> PoolsFor(const Dataset& data, Split split,
                                    std::size_t k, std::uint64_t seed) {
  Rng rng(seed, "pools", static_cast<std::uint64_t>(split));
  std::vector<CandidatePool> sampled;
  bool need_sampling = false;
  for (const auto* q : data.questions(split)) need_sampling |= q->pool.empty();
  if (need_sampling) sampled = BuildPools(data, split, k, rng);
  std::vector<CandidatePool> pools;
  std::size_t i = 0;
  for (const auto* q : data.questions(split)) {
    if (q->pool.empty()) {
      pools.push_back(sampled[i]);
    } else {
      pools.push_back({q->id, q->pool, q->correct});
    }
    ++i;
  }
  return pools;
}

Ranker::Ranker(const ModelParams& params, const Dataset& data)
    : params_(params), data_(data), cache_(data.answers().size()) {}

const Tensor& Ranker::Encoded(int answer_id) {
  const auto& answers = data_.answers();
  const Dataset::Answer& a = data_.answer(answer_id);
  const std::size_t pos = static_cast<std::size_t>(&a - answers.data());
  auto& slot = cache_[pos];
  if (!slot) {
    Tape tape;
    BoundModel bound(tape, params_, nullptr);
    slot = tape.value(EncodeSequence(bound, a.ids));
  }
  return *slot;
}

void Ranker::EncodeAll(const std::vector<int>& ids, Execution exec) {
  std::vector<int> missing;
  for (int id : ids) {
    const Dataset::Answer& a = data_.answer(id);
    if (!cache_[static_cast<std::size_t>(&a - data_.answers().data())]) {
      missing.push_back(id);
    }
  }
  // Each slot is written by exactly one iteration.
  ForEach(missing.size(), exec, [&](std::size_t i) { Encoded(missing[i]); });
}

std::vector<double> Ranker::ScoreCandidates(std::span<const int> question_ids,
                                            const TfVector& question_tf,
                                            std::span<const int> candidates) {
  Tape tape;
  BoundModel bound(tape, params_, nullptr);
  PreparedQuestion q = PrepareQuestion(bound, question_ids, question_tf);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (int id : candidates) {
    Var a = tape.Constant(Encoded(id));
    PairScore s = ScoreAnswer(bound, q, a, data_.answer(id).tf);
    scores.push_back(tape.value(s.score).item());
  }
  return scores;
}

RankedPool Ranker::Rank(const Dataset::Question& question,
                        const CandidatePool& pool) {
  pool.Validate();
  const std::vector<double> scores =
      ScoreCandidates(question.ids, question.tf, pool.candidates);
  return RankByScores(pool, scores);
}

std::vector<RankedPool> Ranker::RankAll(std::span<const CandidatePool> pools,
                                        Execution exec) {
  std::set<int> needed;
  for (const auto& p : pools) needed.insert(p.candidates.begin(), p.candidates.end());
  EncodeAll(std::vector<int>(needed.begin(), needed.end()), exec);
  std::vector<RankedPool> out(pools.size());
  ForEach(pools.size(), exec, [&](std::size_t i) {
    out[i] = Rank(data_.question(pools[i].question_id), pools[i]);
  });
  return out;
}

Ranker::PairTrace Ranker::Trace(std::span<const int> question_ids,
                                const TfVector& question_tf, int answer_id) {
  Tape tape;
  BoundModel bound(tape, params_, nullptr);
  PreparedQuestion q = PrepareQuestion(bound, question_ids, question_tf);
  Var a = tape.Constant(Encoded(answer_id));
  PairScore s = ScoreAnswer(bound, q, a, data_.answer(answer_id).tf);
  PairTrace out;
  out.score = tape.value(s.score).item();
  if (s.trace) {
    const auto w = tape.value(s.trace->weights).data();
    out.weights.assign(w.begin(), w.end());
  }
  return out;
}

Metrics Summarize(std::span<const RankedPool> results) {
  return {PrecisionAt1(results), MeanReciprocalRank(results), results.size()};
}

std::string FormatReport(const Metrics& m, const std::string& title) {
  char buf[256];
  std::string out;
  if (!title.empty()) out += "# " + title + "\n";
  out +=
      "# p_at_1 counts a pool as a hit when any correct answer is ranked "
      "first; mrr uses the best-ranked correct answer\n";
  std::snprintf(buf, sizeof(buf), "p_at_1=%.6f\nmrr=%.6f\nn_pools=%zu\n",
                m.p_at_1, m.mrr, m.n_pools);
  out += buf;
  return out;
}

Explanation Explain(Ranker& ranker, const Dataset& data, int question_id,
                    int answer_id) {
  const Dataset::Question& q = data.question(question_id);
  const Dataset::Answer& a = data.answer(answer_id);
  const Ranker::PairTrace trace = ranker.Trace(q.ids, q.tf, answer_id);
  if (trace.weights.empty()) {
    throw std::invalid_argument("explain: the '" +
                                std::string(HeadName(ranker.params().config().head)) +
                                "' head has no attention weights");
  }
  Explanation e;
  e.question = q.text;
  e.score = trace.score;
  const std::size_t n =
      std::min(a.tokens.size(), ranker.params().config().max_len);
  e.tokens.assign(a.tokens.begin(), a.tokens.begin() + static_cast<std::ptrdiff_t>(n));
  e.weights = trace.weights;
  if (e.tokens.size() != e.weights.size()) {
    throw std::logic_error("explain: " + std::to_string(e.tokens.size()) +
                           " tokens but " + std::to_string(e.weights.size()) +
                           " attention weights");
  }
  return e;
}

std::string RenderHtml(const Explanation& e) {
  const double max_w =
      e.weights.empty() ? 1.0 : *std::max_element(e.weights.begin(), e.weights.end());
  std::string out =
      "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\">"
      "<title>Attention weights</title></head>\n<body>\n";
  out += "<p class=\"question\"><b>Q:</b> " + EscapeHtml(e.question) + "</p>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "<p class=\"score\">score = %.6f</p>\n", e.score);
  out += buf;
  out += "<p class=\"answer\">\n";
  for (std::size_t i = 0; i < e.tokens.size(); ++i) {
    const double intensity = max_w > 0.0 ? e.weights[i] / max_w : 0.0;
    std::snprintf(buf, sizeof(buf),
                  "<span style=\"background-color: rgba(255, 80, 0, %.4f)\" "
                  "title=\"%.6f\">",
                  intensity, e.weights[i]);
    out += buf + EscapeHtml(e.tokens[i]) + "</span>\n";
  }
  out += "</p>\n</body>\n</html>\n";
  return out;
}

std::string RenderTsv(const Explanation& e) {
  std::string out = "token\tweight\n";
  char buf[64];
  for (std::size_t i = 0; i < e.tokens.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "\t%.17g\n", e.weights[i]);
    out += e.tokens[i] + buf;
  }
  return out;
}

}  // namespace glqa
