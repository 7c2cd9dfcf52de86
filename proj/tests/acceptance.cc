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
// Acceptance suite: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "glqa/attention.h"
#include "glqa/checkpoint.h"
#include "glqa/config.h"
#include "glqa/dataset.h"
#include "glqa/encoder.h"
#include "glqa/evaluation.h"
#include "glqa/grad_check.h"
#include "glqa/kernels.h"
#include "glqa/model_grad_check.h"
#include "glqa/ops.h"
#include "glqa/pipeline.h"
#include "glqa/rng.h"
#include "glqa/synthetic.h"
#include "glqa/training.h"

namespace glqa {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// Synthetic protocol shared by criteria 4-7.

SyntheticSpec CorpusSpec() {
  return SyntheticSpec::Parse(
      "vocab=200,train=500,test=100,answer_len=40,k=10,seed=1");
}

RunConfig ProtocolConfig(HeadKind head, std::size_t hidden, std::uint64_t seed) {
  RunConfig cfg;
  cfg.model.embed_dim = 32;
  cfg.model.hidden_dim = hidden;
  cfg.model.tf_dim = 16;
  cfg.model.local_dim = 32;
  cfg.model.proj_dim = 32;
  cfg.model.head = head;
  cfg.pool_k = 10;
  cfg.valid_stride = 10;
  cfg.train.epochs = 60;
  cfg.train.patience = 10;
  cfg.train.seed = seed;
  return cfg;
}

struct RunResult {
  ModelParams params;
  Metrics test;
  std::size_t epochs = 0;
  double seconds = 0.0;
};

class Protocol {
 public:
  Protocol() : corpus_(GenerateSynthetic(CorpusSpec())) {
    data_ = PrepareTrainingData(corpus_.file,
                                ProtocolConfig(HeadKind::kGlobalLocal, 32, 1));
    test_pools_ = PoolsFor(data_, Split::kTest, 10, 1);
  }

  const SyntheticCorpus& corpus() const { return corpus_; }
  const Dataset& data() const { return data_; }
  const std::vector<CandidatePool>& test_pools() const { return test_pools_; }

  Metrics Test(const ModelParams& params) const {
    Ranker ranker(params, data_);
    return Summarize(ranker.RankAll(test_pools_));
  }

  const RunResult& Run(HeadKind head, std::size_t hidden, std::uint64_t seed) {
    const auto key = std::make_tuple(head, hidden, seed);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    const auto start = Clock::now();
    TrainRun run = TrainModel(data_, ProtocolConfig(head, hidden, seed));
    RunResult r;
    r.params = std::move(run.checkpoint.params);
    r.test = Test(r.params);
    r.epochs = run.result.history.size();
    r.seconds = Seconds(start);
    std::fprintf(stderr,
                 "  run head=%s h=%zu seed=%llu: test P@1 %.3f MRR %.3f "
                 "(%zu epochs, %.1fs)\n",
                 std::string(HeadName(head)).c_str(), hidden,
                 static_cast<unsigned long long>(seed), r.test.p_at_1,
                 r.test.mrr, r.epochs, r.seconds);
    return runs_.emplace(key, std::move(r)).first->second;
  }

 private:
  SyntheticCorpus corpus_;
  Dataset data_;
  std::vector<CandidatePool> test_pools_;
  std::map<std::tuple<HeadKind, std::size_t, std::uint64_t>, RunResult> runs_;
};

// ---------------------------------------------------------------------------

Outcome GradientCorrectness() {
  const auto start = Clock::now();
  const auto checks = RunModelGradCheck({});
  const double secs = Seconds(start);
  double worst = 0.0;
  double worst_strict = 0.0;
  std::string worst_group;
  std::string strict_group;
  for (const auto& c : checks) {
    if (c.max_rel_error >= worst) {
      worst = c.max_rel_error;
      worst_group = c.group;
    }
    if (c.max_rel_error_strict >= worst_strict) {
      worst_strict = c.max_rel_error_strict;
      strict_group = c.group;
    }
  }
  Outcome o;
  o.pass = worst < kGradCheckTolerance && secs < 60.0;
  o.detail = Fmt(
      "%zu groups, max rel error %.2e (%s) with floor %g; %.2e (%s) with "
      "floor %g; %.2fs",
      checks.size(), worst, worst_group.c_str(), kModelRelErrorFloor,
      worst_strict, strict_group.c_str(), kRelErrorFloor, secs);
  return o;
}

Outcome InvariantSuite() {
  Rng rng(2026, "acceptance-invariants");
  std::vector<std::string> failures;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto random_row = [&](std::size_t n, double scale) {
    Tensor t(1, n);
    for (double& x : t.data()) x = rng.UniformReal(-scale, scale);
    return t;
  };

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.Uniform(30);
    const Tensor x = random_row(n, 20.0);
    const Tensor p = SoftmaxValue(x);
    double sum = 0.0;
    for (double v : p.data()) sum += v;
    require(std::abs(sum - 1.0) <= 1e-12, "softmax sums to 1");
    Tensor shifted = x;
    const double c = rng.UniformReal(-100.0, 100.0);
    for (double& v : shifted.data()) v += c;
    const Tensor q = SoftmaxValue(shifted);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(p[i] - q[i]));
    require(diff <= 1e-12, "softmax shift invariance");

    const Tensor u = random_row(n, 5.0);
    const Tensor v = random_row(n, 5.0);
    const double cos = CosineValue(u.data(), v.data());
    require(cos >= -1.0 && cos <= 1.0, "cosine range");
    Tensor su = u;
    const double s = rng.UniformReal(0.01, 100.0);
    for (double& e : su.data()) e *= s;
    require(std::abs(CosineValue(su.data(), v.data()) - cos) <= 1e-12,
            "cosine scale invariance");
  }

  for (int trial = 0; trial < 100; ++trial) {
    Tape tape;
    const double alpha = rng.UniformReal(0.1, 3.0);
    const double beta = rng.UniformReal(0.1, 3.0);
    const std::size_t a = 1 + rng.Uniform(10);
    const std::size_t b = 1 + rng.Uniform(10);
    const Tensor j = tape.value(Join(tape.Constant(random_row(a, 4.0)),
                                     tape.Constant(random_row(b, 4.0)), alpha,
                                     beta));
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a; ++i) na += j[i] * j[i];
    for (std::size_t i = a; i < a + b; ++i) nb += j[i] * j[i];
    require(std::abs(std::sqrt(na) - alpha) <= 1e-9 &&
                std::abs(std::sqrt(nb) - beta) <= 1e-9,
            "join norm ratio");
  }

  for (HeadKind head : {HeadKind::kGlobalLocal, HeadKind::kLocal}) {
    ModelConfig config = ToyConfig();
    config.head = head;
    ModelParams params(config);
    params.Initialize(7);
    for (int trial = 0; trial < 50; ++trial) {
      TokenSequence q, a;
      for (std::size_t i = 0, n = 1 + rng.Uniform(8); i < n; ++i)
        q.push_back(2 + static_cast<int>(rng.Uniform(18)));
      for (std::size_t i = 0, n = 1 + rng.Uniform(30); i < n; ++i)
        a.push_back(2 + static_cast<int>(rng.Uniform(18)));
      Tape tape;
      BoundModel model(tape, params, nullptr);
      Var f_q = EncodeQuestion(model, q).pooled;
      Var enc = EncodeSequence(model, a);
      const TfVector tf = MakeTfVector(config.vocab_size, a);
      const AttentionTrace t = head == HeadKind::kGlobalLocal
                                   ? GlobalLocalAttention(model, enc, tf, f_q)
                                   : LocalAttention(model, enc, f_q);
      const Tensor& w = tape.value(t.weights);
      double sum = 0.0;
      bool positive = true;
      for (double x : w.data()) {
        sum += x;
        positive &= x > 0.0;
      }
      require(std::abs(sum - 1.0) <= 1e-9 && positive && w.cols() == a.size(),
              "attention weights sum to 1");
    }
  }

  {
    ModelParams params(ToyConfig());
    params.Initialize(3);
    for (int trial = 0; trial < 50; ++trial) {
      TokenSequence seq;
      for (std::size_t i = 0, n = 1 + rng.Uniform(20); i < n; ++i)
        seq.push_back(2 + static_cast<int>(rng.Uniform(18)));
      TokenSequence perm = seq;
      rng.Shuffle(perm);
      TokenSequence repeated = perm;
      repeated.insert(repeated.end(), seq.begin(), seq.end());
      const TfVector t0 = MakeTfVector(20, seq);
      const TfVector t1 = MakeTfVector(20, perm);
      const TfVector t2 = MakeTfVector(20, repeated);
      require(t0 == t1 && t0 == t2, "TF order/repetition invariance");
      Tape tape;
      BoundModel model(tape, params, nullptr);
      auto b_tf = [&](const TfVector& tf) {
        return tape.value(
            Tanh(GatherWeightedSum(model[ParamId::kW1], tf.ids, tf.weights)));
      };
      require(b_tf(t0) == b_tf(t1) && b_tf(t0) == b_tf(t2),
              "b_tf order/repetition invariance");
    }
  }

  {
    Checkpoint ck;
    ModelConfig config = ToyConfig();
    std::vector<std::string> words;
    for (std::size_t i = 0; i + kNumReserved < config.vocab_size; ++i)
      words.push_back("w" + std::to_string(i));
    ck.vocab = Vocabulary::FromWords(words);
    ck.params = ModelParams(config);
    ck.params.Initialize(11);
    const std::string first = ck.Serialize();
    const Checkpoint back = Checkpoint::Deserialize(first);
    bool same = back.vocab == ck.vocab;
    for (std::size_t i = 0; i < kNumParams; ++i)
      same &= back.params.all()[i].value == ck.params.all()[i].value;
    require(same && back.Serialize() == first, "checkpoint bit-exact roundtrip");
  }

  Outcome o;
  o.pass = failures.empty();
  if (o.pass) {
    o.detail =
        "softmax, cosine, join, attention sums, TF invariance, checkpoint "
        "roundtrip";
  } else {
    std::set<std::string> unique(failures.begin(), failures.end());
    for (const auto& f : unique) o.detail += (o.detail.empty() ? "" : "; ") + f;
    o.detail = "violated: " + o.detail;
  }
  return o;
}

Outcome OverfitOracle() {
  SyntheticSpec spec = SyntheticSpec::Parse(
      "vocab=60,train=20,test=0,answer_len=12,k=5,seed=3");
  const SyntheticCorpus corpus = GenerateSynthetic(spec);
  RunConfig cfg;
  const ModelConfig toy = ToyConfig();
  cfg.model.embed_dim = toy.embed_dim;
  cfg.model.hidden_dim = toy.hidden_dim;
  cfg.model.tf_dim = toy.tf_dim;
  cfg.model.local_dim = toy.local_dim;
  cfg.model.proj_dim = toy.proj_dim;
  cfg.train.keep_prob = 1.0;
  cfg.train.patience = 0;
  cfg.train.epochs = 500;
  cfg.train.batch_size = 4;
  Vocabulary vocab = Vocabulary::Build(Dataset::TrainingCorpus(corpus.file));
  const Dataset data(corpus.file, std::move(vocab));
  const std::vector<CandidatePool> pools = PoolsFor(data, Split::kTrain, 5, 1);

  cfg.model.vocab_size = data.vocab().size();
  ModelParams params(cfg.model);
  params.Initialize(cfg.train.seed);
  const auto start = Clock::now();
  const TrainResult result = Train(params, data, pools, cfg.train);

  // Loss of the returned model over every (question, distractor) pair.
  double loss = 0.0;
  std::size_t pairs = 0;
  Ranker ranker(result.best, data);
  for (const auto* q : data.questions(Split::kTrain)) {
    std::vector<int> ids;
    for (const auto& a : data.answers()) ids.push_back(a.id);
    const auto scores = ranker.ScoreCandidates(q->ids, q->tf, ids);
    double s_star = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == q->correct[0]) s_star = scores[i];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == q->correct[0]) continue;
      loss += HingeLoss(s_star, scores[i], cfg.train.margin);
      ++pairs;
    }
  }
  loss /= static_cast<double>(pairs);
  const Metrics m = Summarize(ranker.RankAll(pools));
  const double last_epoch_loss =
      result.history.empty() ? 0.0 : result.history.back().train_loss;

  Outcome o;
  o.pass = loss < 1e-3 && m.p_at_1 == 1.0 &&
           result.history.size() <= 500;
  o.detail = Fmt(
      "%zu epochs, %zu triplets/epoch, last-epoch loss %.2e, loss over all "
      "%zu pairs %.2e, train-pool P@1 %.3f, %.1fs",
      result.history.size(), data.questions(Split::kTrain).size(),
      last_epoch_loss, pairs, loss, m.p_at_1, Seconds(start));
  return o;
}

Outcome SyntheticGeneralization(Protocol& p) {
  const auto start = Clock::now();
  ModelParams untrained(
      [&] {
        ModelConfig c = ProtocolConfig(HeadKind::kGlobalLocal, 32, 1).model;
        c.vocab_size = p.data().vocab().size();
        return c;
      }());
  untrained.Initialize(1);
  const Metrics base = p.Test(untrained);
  const RunResult& run = p.Run(HeadKind::kGlobalLocal, 32, 1);
  const double n = static_cast<double>(base.n_pools);
  const double chance = 1.0 / 10.0;
  const double three_sigma = 3.0 * std::sqrt(chance * (1.0 - chance) / n);
  const double secs = Seconds(start);
  Outcome o;
  o.pass = run.test.p_at_1 >= 0.8 &&
           std::abs(base.p_at_1 - chance) <= three_sigma && secs <= 900.0;
  o.detail = Fmt(
      "trained test P@1 %.3f (MRR %.3f); untrained P@1 %.3f, band "
      "%.3f +/- %.3f; %.1fs on %d thread(s)",
      run.test.p_at_1, run.test.mrr, base.p_at_1, chance, three_sigma, secs,
      kernels::MaxThreads());
  return o;
}

Outcome AblationDirection(Protocol& p) {
  std::vector<double> gl, concat;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    gl.push_back(p.Run(HeadKind::kGlobalLocal, 32, seed).test.p_at_1);
    concat.push_back(p.Run(HeadKind::kTfLstmConcat, 32, seed).test.p_at_1);
  }
  Outcome o;
  const double mg = Median(gl);
  const double mc = Median(concat);
  o.pass = mg >= mc;
  o.detail = Fmt("median test P@1 over 5 seeds: global-local %.3f vs "
                 "tf-lstm-concat %.3f",
                 mg, mc);
  return o;
}

Outcome SizeSweep(Protocol& p) {
  const std::vector<std::size_t> sizes = {4, 8, 16, 32};
  std::vector<double> p1, mrr;
  for (std::size_t h : sizes) {
    std::vector<double> a, b;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RunResult& r = p.Run(HeadKind::kGlobalLocal, h, seed);
      a.push_back(r.test.p_at_1);
      b.push_back(r.test.mrr);
    }
    p1.push_back(Mean(a));
    mrr.push_back(Mean(b));
  }
  bool ok = true;
  std::string points;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ok &= mrr[i] >= p1[i];
    if (i > 0) ok &= p1[i] >= p1[i - 1] - 0.05;
    points += Fmt("%sh=%zu P@1 %.3f MRR %.3f", i ? ", " : "", sizes[i], p1[i],
                  mrr[i]);
  }
  Outcome o;
  o.pass = ok;
  o.detail = "mean over 5 seeds: " + points;
  return o;
}

Outcome AttentionFocus(Protocol& p) {
  const RunResult& run = p.Run(HeadKind::kGlobalLocal, 32, 1);
  Ranker ranker(run.params, p.data());
  std::size_t above = 0;
  std::size_t total = 0;
  double mean_ratio = 0.0;
  for (const auto* q : p.data().questions(Split::kTest)) {
    const int a = q->correct[0];
    const std::string& keyword =
        p.corpus().keywords[p.corpus().question_topic.at(q->id)];
    const Explanation e = Explain(ranker, p.data(), q->id, a);
    double w = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < e.tokens.size(); ++i) {
      if (e.tokens[i] == keyword) {
        w += e.weights[i];
        ++hits;
      }
    }
    if (hits == 0) continue;
    w /= static_cast<double>(hits);
    const double uniform = 1.0 / static_cast<double>(e.tokens.size());
    above += w > uniform ? 1 : 0;
    mean_ratio += w / uniform;
    ++total;
  }
  const double frac = total ? static_cast<double>(above) / total : 0.0;
  Outcome o;
  o.pass = total >= 50 && frac >= 0.7;
  o.detail = Fmt("keyword weight above 1/n in %zu of %zu test answers (%.1f%%), "
                 "mean weight ratio to 1/n %.2f",
                 above, total, 100.0 * frac,
                 total ? mean_ratio / static_cast<double>(total) : 0.0);
  return o;
}

Outcome MetricOracles() {
  Rng rng(8, "acceptance-metrics");
  std::vector<RankedPool> ranked;
  std::vector<std::size_t> brute_ranks;
  for (int t = 0; t < 100; ++t) {
    CandidatePool pool;
    const std::size_t k = 1 + rng.Uniform(12);
    std::set<int> ids;
    while (ids.size() < k) ids.insert(1 + static_cast<int>(rng.Uniform(100)));
    pool.candidates.assign(ids.begin(), ids.end());
    rng.Shuffle(pool.candidates);
    std::vector<double> scores;
    for (std::size_t i = 0; i < k; ++i)
      scores.push_back(static_cast<double>(rng.Uniform(5)) / 4.0);
    const std::size_t n_correct = 1 + rng.Uniform(std::min<std::size_t>(k, 3));
    for (std::size_t i = 0; i < n_correct; ++i)
      pool.correct.push_back(pool.candidates[i]);
    ranked.push_back(RankByScores(pool, scores));

    std::size_t best = k + 1;
    for (std::size_t c = 0; c < n_correct; ++c) {
      std::size_t ahead = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == c) continue;
        if (scores[j] > scores[c] ||
            (scores[j] == scores[c] && pool.candidates[j] < pool.candidates[c]))
          ++ahead;
      }
      best = std::min(best, ahead + 1);
    }
    brute_ranks.push_back(best);
  }
  std::size_t hits = 0;
  double rr = 0.0;
  bool ranks_match = true;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    hits += brute_ranks[i] == 1 ? 1 : 0;
    rr += 1.0 / static_cast<double>(brute_ranks[i]);
    ranks_match &= ranked[i].best_correct_rank == brute_ranks[i];
  }
  const double brute_p1 = static_cast<double>(hits) / 100.0;
  const double brute_mrr = rr / 100.0;
  const double p1 = PrecisionAt1(ranked);
  const double mrr = MeanReciprocalRank(ranked);
  Outcome o;
  o.pass = ranks_match && p1 == brute_p1 && mrr == brute_mrr;
  o.detail = Fmt("100 random pools: P@1 %.4f vs %.4f, MRR %.6f vs %.6f, "
                 "ranks %s",
                 p1, brute_p1, mrr, brute_mrr, ranks_match ? "equal" : "differ");
  return o;
}

}  // namespace
}  // namespace glqa

int main(int argc, char** argv) {
  using namespace glqa;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int id) { return selected.empty() || selected.count(id); };

  std::unique_ptr<Protocol> protocol;
  auto proto = [&]() -> Protocol& {
    if (!protocol) protocol = std::make_unique<Protocol>();
    return *protocol;
  };

  const std::vector<std::pair<int, std::pair<const char*, std::function<Outcome()>>>>
      criteria = {
          {1, {"gradient correctness", GradientCorrectness}},
          {2, {"invariant suite", InvariantSuite}},
          {3, {"overfit oracle", OverfitOracle}},
          {4, {"synthetic generalization", [&] { return SyntheticGeneralization(proto()); }}},
          {5, {"ablation direction", [&] { return AblationDirection(proto()); }}},
          {6, {"size-sweep trend", [&] { return SizeSweep(proto()); }}},
          {7, {"attention focus", [&] { return AttentionFocus(proto()); }}},
          {8, {"metric oracles", MetricOracles}},
      };

  int failed = 0;
  for (const auto& [id, c] : criteria) {
    if (!wanted(id)) continue;
    Outcome o;
    try {
      o = c.second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id,
                c.first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
