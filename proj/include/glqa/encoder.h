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
#ifndef GLQA_ENCODER_H_
#define GLQA_ENCODER_H_

#include <span>

#include "glqa/model.h"
#include "glqa/rng.h"
#include "glqa/tape.h"

namespace glqa {

// m x e embedding rows for `ids`. PAD rows are zero and never receive a
// gradient. Throws std::invalid_argument("cannot encode empty sequence").
Var Embed(BoundModel& model, std::span<const int> ids);

// One LSTM direction over the rows of x (m x e) as a single tape record
// with hand-written backpropagation through time. Output row t is the
// hidden state after consuming inputs 0..t (forward) or m-1..t (reverse).
Var LstmDirection(Var x, Var w_input, Var w_hidden, Var bias, bool reverse);

// The same recurrence assembled from primitive tape ops, one step at a
// time. Kept as the reference the fused kernel is tested against.
Var LstmDirectionReference(Var x, Var w_input, Var w_hidden, Var bias,
                           bool reverse);

// m x 2h: [forward state after 0..i || backward state after m-1..i].
Var BiLstm(BoundModel& model, Var embedded);

Var MeanPool(Var encoded);
Var MaxPool(Var encoded);

// Inverted dropout on LSTM output rows. keep_prob == 1 disables it.
struct DropoutSpec {
  double keep_prob = 1.0;
  Rng* rng = nullptr;
};

// Embed + BiLstm (+ dropout) over the first max_len ids.
Var EncodeSequence(BoundModel& model, std::span<const int> ids,
                   const DropoutSpec& dropout = {});

struct EncodedQuestion {
  Var outputs;  // m x H
  Var pooled;   // 1 x H, mean over rows
};

EncodedQuestion EncodeQuestion(BoundModel& model, std::span<const int> ids,
                               const DropoutSpec& dropout = {});

}  // namespace glqa

#endif  // GLQA_ENCODER_H_
