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
// Serial reference vs OpenMP version of each parallel kernel.
#include <benchmark/benchmark.h>

#include "glqa/evaluation.h"
#include "glqa/kernels.h"
#include "glqa/rng.h"
#include "glqa/synthetic.h"
#include "glqa/training.h"

namespace glqa {
namespace {

Tensor RandomTensor(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(r, c);
  for (double& x : t.data()) x = rng.UniformReal(-1.0, 1.0);
  return t;
}

void BM_MatMul(benchmark::State& state, bool parallel) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor a = RandomTensor(n, n, 1);
  const Tensor b = RandomTensor(n, n, 2);
  Tensor out;
  for (auto _ : state) {
    if (parallel) {
      kernels::MatMul(a, b, out);
    } else {
      kernels::MatMulSerial(a, b, out);
    }
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}
BENCHMARK_CAPTURE(BM_MatMul, serial, false)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_MatMul, parallel, true)->Arg(64)->Arg(256);

void BM_MatMulTransAAcc(benchmark::State& state, bool parallel) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor a = RandomTensor(n, n, 3);
  const Tensor g = RandomTensor(n, n, 4);
  Tensor acc(n, n);
  for (auto _ : state) {
    if (parallel) {
      kernels::MatMulTransAAcc(a, g, acc);
    } else {
      kernels::MatMulTransAAccSerial(a, g, acc);
    }
    benchmark::DoNotOptimize(acc.data().data());
  }
}
BENCHMARK_CAPTURE(BM_MatMulTransAAcc, serial, false)->Arg(256);
BENCHMARK_CAPTURE(BM_MatMulTransAAcc, parallel, true)->Arg(256);

struct Corpus {
  Corpus() {
    const SyntheticCorpus c = GenerateSynthetic(SyntheticSpec::Parse(
        "vocab=200,train=200,test=50,answer_len=40,k=10,seed=1"));
    data = Dataset(c.file, Vocabulary::Build(Dataset::TrainingCorpus(c.file)));
    ModelConfig m;
    m.vocab_size = data.vocab().size();
    m.embed_dim = 32;
    m.hidden_dim = 32;
    m.tf_dim = 16;
    m.local_dim = 32;
    m.proj_dim = 32;
    params = ModelParams(m);
    params.Initialize(1);
    pools = PoolsFor(data, Split::kTest, 10, 1);
  }
  Dataset data;
  ModelParams params;
  std::vector<CandidatePool> pools;
};

const Corpus& SharedCorpus() {
  static const Corpus c;
  return c;
}

void BM_RankAll(benchmark::State& state, Execution exec) {
  const Corpus& c = SharedCorpus();
  for (auto _ : state) {
    Ranker ranker(c.params, c.data);
    benchmark::DoNotOptimize(ranker.RankAll(c.pools, exec));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(c.pools.size()));
}
BENCHMARK_CAPTURE(BM_RankAll, serial, Execution::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RankAll, parallel, Execution::kParallel)
    ->Unit(benchmark::kMillisecond);

void BM_BatchGradient(benchmark::State& state, Execution exec) {
  const Corpus& c = SharedCorpus();
  Rng rng(2);
  std::vector<Triplet> batch = EpochTriplets(c.data, rng);
  batch.resize(16);
  TrainConfig cfg;
  Gradients grads(c.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BatchGradient(c.params, c.data, batch, cfg, 0, grads, exec));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(batch.size()));
}
BENCHMARK_CAPTURE(BM_BatchGradient, serial, Execution::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BatchGradient, parallel, Execution::kParallel)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace glqa

BENCHMARK_MAIN();
