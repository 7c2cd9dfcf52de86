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
#include "glqa/training.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>

#include "glqa/encoder.h"
#include "glqa/ops.h"
#include "glqa/scoring.h"

namespace glqa {

void TrainConfig::Validate() const {
  if (!(margin > 0.0)) throw std::invalid_argument("margin must be > 0");
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw std::invalid_argument("keep_prob must be in (0, 1]");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
}

double HingeLoss(double sigma_star, double sigma_d, double margin) {
  const double v = margin - sigma_star + sigma_d;
  return v > 0.0 || std::isnan(v) ? v : 0.0;
}

Var HingeLoss(Var sigma_star, Var sigma_d, double margin) {
  Var m = sigma_star.tape->Constant(Tensor::Scalar(margin));
  return Relu(Add(Sub(m, sigma_star), sigma_d));
}

int SampleDistractor(const Dataset& data, const Dataset::Question& question,
                     Rng& rng) {
  const auto& answers = data.answers();
  std::size_t n_correct = 0;
  for (int c : question.correct) n_correct += data.has_answer(c) ? 1 : 0;
  if (answers.size() <= n_correct) {
    throw DataError("question " + std::to_string(question.id) +
                    " has no possible distractor");
  }
  // Rejection sampling keeps the draw uniform over non-correct answers.
  for (;;) {
    const int id = answers[rng.Uniform(answers.size())].id;
    bool correct = false;
    for (int c : question.correct) correct |= c == id;
    if (!correct) return id;
  }
}

Triplet SampleTriplet(const Dataset& data, Rng& rng) {
  if (data.answers().size() < 2) {
    throw DataError("triplet sampling needs at least 2 answers");
  }
  const auto train = data.questions(Split::kTrain);
  if (train.empty()) throw DataError("no training questions");
  const Dataset::Question& q = *train[rng.Uniform(train.size())];
  Triplet t;
  t.question_id = q.id;
  t.answer_id = q.correct[rng.Uniform(q.correct.size())];
  t.distractor_id = SampleDistractor(data, q, rng);
  return t;
}

std::vector<Triplet> EpochTriplets(const Dataset& data, Rng& rng) {
  if (data.answers().size() < 2) {
    throw DataError("triplet sampling needs at least 2 answers");
  }
  auto train = data.questions(Split::kTrain);
  if (train.empty()) throw DataError("no training questions");
  rng.Shuffle(train);
  std::vector<Triplet> out;
  out.reserve(train.size());
  for (const auto* q : train) {
    Triplet t;
    t.question_id = q->id;
    t.answer_id = q->correct[rng.Uniform(q->correct.size())];
    t.distractor_id = SampleDistractor(data, *q, rng);
    out.push_back(t);
  }
  return out;
}

AdamState::AdamState(const ModelParams& params) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const Tensor& v = params.all()[i].value;
    m[i] = Tensor(v.rows(), v.cols());
    s[i] = Tensor(v.rows(), v.cols());
  }
}

void AdamStep(ModelParams& params, const Gradients& grads, AdamState& state,
              const TrainConfig& cfg) {
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < kNumParams; ++i) {
    Parameter& p = params.all()[i];
    if (!p.requires_grad) continue;
    const Tensor& g = grads.all()[i];
    if (!g.SameShape(p.value) || !state.m[i].SameShape(p.value)) {
      throw ShapeError("adam: shape mismatch for " + p.name);
    }
    auto theta = p.value.data();
    auto m = state.m[i].data();
    auto s = state.s[i].data();
    const auto gd = g.data();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gd[j];
      s[j] = cfg.beta2 * s[j] + (1.0 - cfg.beta2) * gd[j] * gd[j];
      const double m_hat = m[j] / c1;
      const double s_hat = s[j] / c2;
      theta[j] -= cfg.learning_rate * m_hat / (std::sqrt(s_hat) + cfg.epsilon);
    }
  }
}

Var TripletLoss(BoundModel& model, const Dataset& data, const Triplet& triplet,
                double margin, const DropoutSpec& dropout) {
  const Dataset::Question& q = data.question(triplet.question_id);
  const Dataset::Answer& a = data.answer(triplet.answer_id);
  const Dataset::Answer& d = data.answer(triplet.distractor_id);
  PreparedQuestion pq = PrepareQuestion(model, q.ids, q.tf, dropout);
  Var a_enc = EncodeSequence(model, a.ids, dropout);
  Var d_enc = EncodeSequence(model, d.ids, dropout);
  Var s_star = ScoreAnswer(model, pq, a_enc, a.tf).score;
  Var s_d = ScoreAnswer(model, pq, d_enc, d.tf).score;
  return HingeLoss(s_star, s_d, margin);
}

double BatchGradient(const ModelParams& params, const Dataset& data,
                     std::span<const Triplet> batch, const TrainConfig& cfg,
                     std::uint64_t first_index, Gradients& grads,
                     Execution execution) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  std::vector<Gradients> slots(batch.size(), Gradients(params));
  std::vector<double> losses(batch.size(), 0.0);

  auto run = [&](std::size_t i) {
    Rng dropout_rng(cfg.seed, "dropout", first_index + i);
    DropoutSpec dropout{cfg.keep_prob, &dropout_rng};
    Tape tape;
    BoundModel model(tape, params, &slots[i]);
    Var loss = TripletLoss(model, data, batch[i], cfg.margin, dropout);
    losses[i] = tape.value(loss).item();
    if (losses[i] > 0.0) tape.Backward(loss);
  };

  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < batch.size(); ++i) run(i);
  } else {
    std::exception_ptr error;
    std::mutex mu;
    const long n = static_cast<long>(batch.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        run(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  }

  grads.Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    grads.Add(slots[i]);
    total += losses[i];
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  grads.Scale(scale);
  return total * scale;
}

TrainResult Train(const ModelParams& initial, const Dataset& data,
                  std::span<const CandidatePool> valid_pools,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.Validate();
  TrainResult result;
  result.best = initial;
  if (cfg.epochs == 0) return result;
  if (data.questions(Split::kTrain).empty()) {
    throw DataError("no training questions");
  }
  if (valid_pools.empty()) throw DataError("no validation pools");

  ModelParams params = initial;
  AdamState state(params);
  Gradients grads(params);
  Rng triplet_rng(cfg.seed, "triplets");
  double best_p1 = -1.0;
  std::size_t since_improvement = 0;
  std::uint64_t triplet_index = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Triplet> triplets = EpochTriplets(data, triplet_rng);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < triplets.size(); b += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, triplets.size() - b);
      const std::span<const Triplet> batch(triplets.data() + b, n);
      const double loss = BatchGradient(params, data, batch, cfg, triplet_index,
                                        grads, cfg.execution);
      triplet_index += n;
      if (!std::isfinite(loss)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "training diverged: non-finite loss in epoch %zu at "
                      "triplet %zu",
                      epoch, b);
        throw DivergenceError(buf);
      }
      loss_sum += loss * static_cast<double>(n);
      AdamStep(params, grads, state, cfg);
    }

    Ranker ranker(params, data);
    const std::vector<RankedPool> ranked =
        ranker.RankAll(valid_pools, cfg.execution);
    const Metrics m = Summarize(ranked);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(triplets.size());
    rec.valid_p_at_1 = m.p_at_1;
    rec.valid_mrr = m.mrr;
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (m.p_at_1 >= best_p1) {
      result.best = params;
      result.best_epoch = epoch;
    }
    if (m.p_at_1 > best_p1) {
      best_p1 = m.p_at_1;
      since_improvement = 0;
    } else if (++since_improvement >= cfg.patience && cfg.patience > 0) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

std::string HistoryCsv(std::span<const EpochRecord> history) {
  std::string out = "epoch,train_loss,valid_p_at_1,valid_mrr,seconds\n";
  char buf[160];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.6f,%.6f,%.3f\n", r.epoch,
                  r.train_loss, r.valid_p_at_1, r.valid_mrr, r.seconds);
    out += buf;
  }
  return out;
}

}  // namespace glqa
