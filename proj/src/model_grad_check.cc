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
#include "glqa/model_grad_check.h"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "glqa/encoder.h"
#include "glqa/grad_check.h"
#include "glqa/rng.h"
#include "glqa/scoring.h"
#include "glqa/training.h"

namespace glqa {
namespace {

struct ToyTriplet {
  TokenSequence q, a, d;
  TfVector q_tf, a_tf, d_tf;
};

ToyTriplet MakeTriplet(std::size_t vocab_size, std::uint64_t seed) {
  Rng rng(seed, "grad-check-data");
  auto seq = [&](std::size_t n) {
    TokenSequence s;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(kNumReserved +
                  static_cast<int>(rng.Uniform(vocab_size - kNumReserved)));
    }
    return s;
  };
  ToyTriplet t;
  t.q = seq(5);
  t.a = seq(7);
  t.d = seq(6);
  t.q_tf = MakeTfVector(vocab_size, t.q);
  t.a_tf = MakeTfVector(vocab_size, t.a);
  t.d_tf = MakeTfVector(vocab_size, t.d);
  return t;
}

Var Loss(BoundModel& model, const ToyTriplet& t, double margin) {
  PreparedQuestion q = PrepareQuestion(model, t.q, t.q_tf);
  Var s_star = ScoreAnswer(model, q, EncodeSequence(model, t.a), t.a_tf).score;
  Var s_d = ScoreAnswer(model, q, EncodeSequence(model, t.d), t.d_tf).score;
  return HingeLoss(s_star, s_d, margin);
}

struct Group {
  const char* name;
  HeadKind head;
  std::vector<ParamId> ids;
};

}  // namespace

ModelConfig ToyConfig() {
  ModelConfig c;
  c.vocab_size = 20;
  c.embed_dim = 8;
  c.hidden_dim = 8;
  c.tf_dim = 4;
  c.local_dim = 8;
  c.proj_dim = 8;
  return c;
}

std::vector<GroupCheck> RunModelGradCheck(const ModelGradCheckOptions& opts) {
  const ToyTriplet triplet = MakeTriplet(opts.dims.vocab_size, opts.seed);
  const std::vector<Group> groups = {
      {"embedding", HeadKind::kGlobalLocal, {ParamId::kEmbedding}},
      {"lstm_fwd",
       HeadKind::kGlobalLocal,
       {ParamId::kFwdInput, ParamId::kFwdHidden, ParamId::kFwdBias}},
      {"lstm_bwd",
       HeadKind::kGlobalLocal,
       {ParamId::kBwdInput, ParamId::kBwdHidden, ParamId::kBwdBias}},
      {"W1", HeadKind::kGlobalLocal, {ParamId::kW1}},
      {"W2", HeadKind::kGlobalLocal, {ParamId::kW2}},
      {"W3", HeadKind::kGlobalLocal, {ParamId::kW3}},
      {"W4", HeadKind::kGlobalLocal, {ParamId::kW4}},
      {"W_ad", HeadKind::kLocal, {ParamId::kWad}},
      {"W_qd", HeadKind::kLocal, {ParamId::kWqd}},
      {"w_ms", HeadKind::kLocal, {ParamId::kWms}},
      {"W_ff", HeadKind::kTfLstmConcat, {ParamId::kWff}},
  };

  std::vector<GroupCheck> out;
  for (const Group& g : groups) {
    ModelConfig config = opts.dims;
    config.head = g.head;
    ModelParams params(config);
    params.Initialize(opts.seed);
    if (opts.init_scale > 0.0) {
      Rng rng(opts.seed, "grad-check-init");
      for (Parameter& p : params.all())
        for (double& x : p.value.data())
          x = rng.UniformReal(-opts.init_scale, opts.init_scale);
      for (double& x : params[ParamId::kEmbedding].value.row(kPadId)) x = 0.0;
    }

    ToyTriplet t = triplet;
    {
      Tape tape;
      BoundModel model(tape, params, nullptr);
      PreparedQuestion q = PrepareQuestion(model, t.q, t.q_tf);
      const double s_a = tape.value(
          ScoreAnswer(model, q, EncodeSequence(model, t.a), t.a_tf).score).item();
      const double s_d = tape.value(
          ScoreAnswer(model, q, EncodeSequence(model, t.d), t.d_tf).score).item();
      if (s_a > s_d) {
        std::swap(t.a, t.d);
        std::swap(t.a_tf, t.d_tf);
      }
    }

    Gradients grads(params);
    {
      Tape tape;
      BoundModel model(tape, params, &grads);
      tape.Backward(Loss(model, t, opts.margin));
    }
    auto f = [&]() {
      Tape tape;
      BoundModel model(tape, params, nullptr);
      return tape.value(Loss(model, t, opts.margin)).item();
    };

    GroupCheck check;
    check.group = g.name;
    check.head = std::string(HeadName(g.head));
    for (ParamId id : g.ids) {
      Parameter& p = params[id];
      const std::vector<double> numeric =
          NumericGradient(f, p.value.data(), opts.step);
      const GradCheckResult r =
          CompareGradients(grads[id].data(), numeric, kModelRelErrorFloor);
      const GradCheckResult strict =
          CompareGradients(grads[id].data(), numeric, kRelErrorFloor);
      check.coordinates += p.value.size();
      check.max_abs_error = std::max(check.max_abs_error, r.max_abs_error);
      check.max_rel_error_strict =
          std::max(check.max_rel_error_strict, strict.max_rel_error);
      if (r.max_rel_error >= check.max_rel_error) {
        check.max_rel_error = r.max_rel_error;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s[%zu] analytic=%.6e numeric=%.6e",
                      p.name.c_str(), r.worst_index, r.analytic, r.numeric);
        check.worst = buf;
      }
    }
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace glqa
