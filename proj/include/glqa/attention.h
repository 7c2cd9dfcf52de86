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
#ifndef GLQA_ATTENTION_H_
#define GLQA_ATTENTION_H_

#include <vector>

#include "glqa/model.h"
#include "glqa/tape.h"
#include "glqa/text.h"

namespace glqa {

// Joint representation: [ (alpha/|x_tf|) x_tf || (beta/|x_rnn|) x_rnn ],
// applied row by row when both operands have n rows. A zero part is passed
// through unscaled and reported to Diagnostics.
Var Join(Var x_tf, Var x_rnn, double alpha, double beta);

// Raw coefficients (1 x n, before softmax) and weights (1 x n, softmax).
struct AttentionTrace {
  Var raw;
  Var weights;
};

// Global-local attention of an encoded answer (n x H) against the pooled
// question f_q (1 x H):
//   b_tf    = tanh(a_tf W1)               once per answer
//   b_loc_i = a_i W2
//   g_i     = Join(b_tf, b_loc_i, alpha, beta)
//   raw_i   = cos(g_i W3, f_q W4)         degenerate -> 0 with diagnostic
//   weights = softmax(raw)
AttentionTrace GlobalLocalAttention(BoundModel& model, Var answer,
                                    const TfVector& answer_tf, Var f_q);

// Local attention: raw_i = w_ms . tanh(a_i W_ad + f_q W_qd).
AttentionTrace LocalAttention(BoundModel& model, Var answer, Var f_q);

// sum_i weights_i * answer_i, 1 x H. Throws ShapeError on length mismatch.
Var AttendedAnswer(Var answer, Var weights);

// Join(q_tf, f_q) with the model's alpha/beta; q_tf enters densely.
Var FinalQuestionRep(BoundModel& model, const TfVector& question_tf, Var f_q);
// Join(a_tf, a_hat).
Var FinalAnswerRep(BoundModel& model, const TfVector& answer_tf, Var a_hat);

// cos(q_rep, a_rep).
Var Score(Var question_rep, Var answer_rep);

// Ablation representation: [tanh(x_tf W_ff) || pooled].
Var TfLstmConcatRep(BoundModel& model, const TfVector& tf, Var pooled);

}  // namespace glqa

#endif  // GLQA_ATTENTION_H_
