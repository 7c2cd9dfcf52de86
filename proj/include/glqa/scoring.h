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
#ifndef GLQA_SCORING_H_
#define GLQA_SCORING_H_

#include <optional>
#include <span>

#include "glqa/attention.h"
#include "glqa/encoder.h"
#include "glqa/model.h"

namespace glqa {

// A question encoded once and reused against every candidate answer.
struct PreparedQuestion {
  EncodedQuestion encoded;
  Var rep;  // head-specific final question representation
};

PreparedQuestion PrepareQuestion(BoundModel& model, std::span<const int> ids,
                                 const TfVector& tf,
                                 const DropoutSpec& dropout = {});

struct PairScore {
  Var score;                            // 1 x 1 cosine
  std::optional<AttentionTrace> trace;  // absent for the concatenation head
};

// Scores an encoded answer (n x H LSTM outputs) under the model's head.
// Both training and ranking go through this one function.
PairScore ScoreAnswer(BoundModel& model, const PreparedQuestion& question,
                      Var answer, const TfVector& answer_tf);

}  // namespace glqa

#endif  // GLQA_SCORING_H_
