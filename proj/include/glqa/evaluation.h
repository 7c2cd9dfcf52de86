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
#ifndef GLQA_EVALUATION_H_
#define GLQA_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glqa/dataset.h"
#include "glqa/model.h"
#include "glqa/rng.h"
#include "glqa/tensor.h"

namespace glqa {

struct CandidatePool {
  int question_id = 0;
  std::vector<int> candidates;  // distinct
  std::vector<int> correct;     // non-empty subset of candidates

  // Throws std::invalid_argument when an invariant is broken.
  void Validate() const;
};

struct RankedPool {
  int question_id = 0;
  std::vector<int> ids;        // best first
  std::vector<double> scores;  // non-increasing
  std::size_t best_correct_rank = 0;  // 1-based; 0 when none is correct
};

// Sorts candidates by descending score, ties by ascending id.
RankedPool RankByScores(const CandidatePool& pool,
                        std::span<const double> scores);

// Fraction of pools whose best correct answer is ranked first. A pool with
// several correct answers counts as a hit if any of them is first.
double PrecisionAt1(std::span<const RankedPool> results);
// Mean of 1 / best_correct_rank.
double MeanReciprocalRank(std::span<const RankedPool> results);

// The correct answers plus k - |correct| distractors drawn uniformly from
// the rest of the answer store. Throws DataError if the store has fewer
// than k answers.
std::vector<CandidatePool> BuildPools(const Dataset& data, Split split,
                                      std::size_t k, Rng& rng);

// Stored pools where a question has one, sampled pools otherwise.
std::vector<CandidatePool> PoolsFor(const Dataset& data, Split split,
                                    std::size_t k, std::uint64_t seed);

enum class Execution { kSerial, kParallel };

// Scores questions against candidate answers with a read-only model.
// Answer LSTM outputs do not depend on the question, so each answer is
// encoded once and cached; attention and scoring then run per pair.
class Ranker {
 public:
  Ranker(const ModelParams& params, const Dataset& data);

  std::vector<double> ScoreCandidates(std::span<const int> question_ids,
                                      const TfVector& question_tf,
                                      std::span<const int> candidates);

  RankedPool Rank(const Dataset::Question& question,
                  const CandidatePool& pool);

  // Pools are independent; kParallel spreads them across OpenMP threads.
  // The two modes produce bitwise-identical results.
  std::vector<RankedPool> RankAll(std::span<const CandidatePool> pools,
                                  Execution exec = Execution::kParallel);

  // Attention weights and score of one pair, computed by the same path
  // ScoreCandidates uses. Empty weights for a head without attention.
  struct PairTrace {
    double score = 0.0;
    std::vector<double> weights;
  };
  PairTrace Trace(std::span<const int> question_ids,
                  const TfVector& question_tf, int answer_id);

  const ModelParams& params() const { return params_; }

 private:
  const Tensor& Encoded(int answer_id);
  void EncodeAll(const std::vector<int>& ids, Execution exec);

  const ModelParams& params_;
  const Dataset& data_;
  std::vector<std::optional<Tensor>> cache_;  // by answer position
};

struct Metrics {
  double p_at_1 = 0.0;
  double mrr = 0.0;
  std::size_t n_pools = 0;
};

Metrics Summarize(std::span<const RankedPool> results);

// Key=value report preceded by a comment header describing the metric
// conventions.
std::string FormatReport(const Metrics& m, const std::string& title = "");

// Answer tokens paired with their attention weights.
struct Explanation {
  std::string question;
  std::vector<std::string> tokens;
  std::vector<double> weights;
  double score = 0.0;
};

Explanation Explain(Ranker& ranker, const Dataset& data, int question_id,
                    int answer_id);

// One <span> per token, background alpha proportional to weight / max.
std::string RenderHtml(const Explanation& e);
// "token\tweight" lines.
std::string RenderTsv(const Explanation& e);

}  // namespace glqa

#endif  // GLQA_EVALUATION_H_
