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
#ifndef GLQA_TRAINING_H_
#define GLQA_TRAINING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glqa/dataset.h"
#include "glqa/encoder.h"
#include "glqa/evaluation.h"
#include "glqa/model.h"
#include "glqa/rng.h"
#include "glqa/tape.h"

namespace glqa {

struct TrainConfig {
  double margin = 0.2;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 20;
  std::size_t batch_size = 16;
  double keep_prob = 0.7;
  // Validation checks without improvement before stopping; 0 never stops.
  std::size_t patience = 5;
  std::uint64_t seed = 1;
  // Triplet gradients within a batch are computed on OpenMP threads.
  Execution execution = Execution::kParallel;

  void Validate() const;
};

// Non-finite loss during training.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// max(0, margin - sigma_star + sigma_d).
double HingeLoss(double sigma_star, double sigma_d, double margin);
Var HingeLoss(Var sigma_star, Var sigma_d, double margin);

struct Triplet {
  int question_id = 0;
  int answer_id = 0;      // a correct answer
  int distractor_id = 0;  // not a correct answer of the question
};

// Distractor drawn uniformly from the answers that are not correct for
// `question`. Throws DataError when there is none.
int SampleDistractor(const Dataset& data, const Dataset::Question& question,
                     Rng& rng);

// Question uniform over training questions, one of its correct answers
// uniformly, then a distractor. Throws DataError with fewer than two answers
// or no training questions.
Triplet SampleTriplet(const Dataset& data, Rng& rng);

// One pass: every training question once in shuffled order, each with a
// freshly sampled correct answer and distractor.
std::vector<Triplet> EpochTriplets(const Dataset& data, Rng& rng);

struct AdamState {
  std::array<Tensor, kNumParams> m;
  std::array<Tensor, kNumParams> s;
  std::uint64_t t = 0;

  AdamState() = default;
  explicit AdamState(const ModelParams& params);
};

// Standard bias-corrected Adam update of every trainable parameter.
void AdamStep(ModelParams& params, const Gradients& grads, AdamState& state,
              const TrainConfig& cfg);

// Loss of one triplet recorded on `model`'s tape. The question is encoded
// once and shared by both answers.
Var TripletLoss(BoundModel& model, const Dataset& data, const Triplet& triplet,
                double margin, const DropoutSpec& dropout = {});

// Mean loss of a batch; gradients (of the mean) are written to `grads`.
// Each triplet gets its own tape and gradient buffer, and the buffers are
// summed in batch order, so both execution modes give identical results.
double BatchGradient(const ModelParams& params, const Dataset& data,
                     std::span<const Triplet> batch, const TrainConfig& cfg,
                     std::uint64_t first_index, Gradients& grads,
                     Execution execution);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_p_at_1 = 0.0;
  double valid_mrr = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  ModelParams best;  // parameters at the best validation check
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains from `initial` and returns the best-validation checkpoint. Ties in
// validation P@1 move the checkpoint to the later epoch, but only a strict
// improvement resets the patience counter.
TrainResult Train(const ModelParams& initial, const Dataset& data,
                  std::span<const CandidatePool> valid_pools,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// "epoch,train_loss,valid_p_at_1,valid_mrr,seconds" plus one line per epoch.
std::string HistoryCsv(std::span<const EpochRecord> history);

}  // namespace glqa

#endif  // GLQA_TRAINING_H_
