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
#include "glqa/scoring.h"

namespace glqa {

PreparedQuestion PrepareQuestion(BoundModel& model, std::span<const int> ids,
                                 const TfVector& tf,
                                 const DropoutSpec& dropout) {
  PreparedQuestion q;
  q.encoded = EncodeQuestion(model, ids, dropout);
  switch (model.config().head) {
    case HeadKind::kGlobalLocal:
      q.rep = FinalQuestionRep(model, tf, q.encoded.pooled);
      break;
    case HeadKind::kLocal:
      q.rep = q.encoded.pooled;
      break;
    case HeadKind::kTfLstmConcat:
      q.rep = TfLstmConcatRep(model, tf, q.encoded.pooled);
      break;
  }
  return q;
}

PairScore ScoreAnswer(BoundModel& model, const PreparedQuestion& question,
                      Var answer, const TfVector& answer_tf) {
  const Var f_q = question.encoded.pooled;
  switch (model.config().head) {
    case HeadKind::kGlobalLocal: {
      AttentionTrace trace = GlobalLocalAttention(model, answer, answer_tf, f_q);
      Var rep = FinalAnswerRep(model, answer_tf,
                               AttendedAnswer(answer, trace.weights));
      return {Score(question.rep, rep), trace};
    }
    case HeadKind::kLocal: {
      AttentionTrace trace = LocalAttention(model, answer, f_q);
      return {Score(question.rep, AttendedAnswer(answer, trace.weights)), trace};
    }
    case HeadKind::kTfLstmConcat: {
      Var rep = TfLstmConcatRep(model, answer_tf, MeanPool(answer));
      return {Score(question.rep, rep), std::nullopt};
    }
  }
  return {};
}

}  // namespace glqa
