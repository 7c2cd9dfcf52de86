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
#include "glqa/attention.h"

#include <string>

#include "glqa/ops.h"

namespace glqa {
namespace {

Var TfProjection(BoundModel& model, ParamId table, const TfVector& tf) {
  const Tensor& w = model.tape().value(model[table]);
  if (tf.dimension != w.rows()) {
    throw ShapeError("tf_projection: TF dimension " +
                     std::to_string(tf.dimension) + " does not match " +
                     ShapeString(w.shape()));
  }
  return Tanh(GatherWeightedSum(model[table], tf.ids, tf.weights));
}

}  // namespace

Var Join(Var x_tf, Var x_rnn, double alpha, double beta) {
  return Concat(NormalizeRows(x_tf, alpha), NormalizeRows(x_rnn, beta), 1);
}

AttentionTrace GlobalLocalAttention(BoundModel& model, Var answer,
                                    const TfVector& answer_tf, Var f_q) {
  Tape& t = model.tape();
  const std::size_t n = t.value(answer).rows();
  const ModelConfig& cfg = model.config();
  Var b_tf = TfProjection(model, ParamId::kW1, answer_tf);
  Var b_loc = MatMul(answer, model[ParamId::kW2]);
  // Normalizing b_tf once and broadcasting equals joining it per row.
  Var joined = Concat(BroadcastRows(NormalizeRows(b_tf, cfg.alpha), n),
                      NormalizeRows(b_loc, cfg.beta), 1);
  Var keys = MatMul(joined, model[ParamId::kW3]);
  Var query = MatMul(f_q, model[ParamId::kW4]);
  Var raw = CosineRows(keys, query);
  return {raw, Softmax(raw)};
}

AttentionTrace LocalAttention(BoundModel& model, Var answer, Var f_q) {
  const std::size_t n = model.tape().value(answer).rows();
  Var m = Add(MatMul(answer, model[ParamId::kWad]),
              BroadcastRows(MatMul(f_q, model[ParamId::kWqd]), n));
  Var raw = MatMul(model[ParamId::kWms], Transpose(Tanh(m)));
  return {raw, Softmax(raw)};
}

Var AttendedAnswer(Var answer, Var weights) {
  Tape& t = *answer.tape;
  const Tensor& a = t.value(answer);
  const Tensor& w = t.value(weights);
  if (w.rows() != 1 || w.cols() != a.rows()) {
    throw ShapeError("attended_answer: weights " + ShapeString(w.shape()) +
                     " do not match answer " + ShapeString(a.shape()));
  }
  return MatMul(weights, answer);
}

Var FinalQuestionRep(BoundModel& model, const TfVector& question_tf, Var f_q) {
  const ModelConfig& cfg = model.config();
  return Join(model.tape().Constant(question_tf.Dense()), f_q, cfg.alpha,
              cfg.beta);
}

Var FinalAnswerRep(BoundModel& model, const TfVector& answer_tf, Var a_hat) {
  const ModelConfig& cfg = model.config();
  return Join(model.tape().Constant(answer_tf.Dense()), a_hat, cfg.alpha,
              cfg.beta);
}

Var Score(Var question_rep, Var answer_rep) {
  return Cosine(question_rep, answer_rep);
}

Var TfLstmConcatRep(BoundModel& model, const TfVector& tf, Var pooled) {
  return Concat(TfProjection(model, ParamId::kWff, tf), pooled, 1);
}

}  // namespace glqa
