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
#include "glqa/pipeline.h"

namespace glqa {

Dataset PrepareTrainingData(const DatasetFile& file, const RunConfig& cfg) {
  Vocabulary vocab = Vocabulary::Build(Dataset::TrainingCorpus(file),
                                       cfg.min_count, cfg.max_vocab);
  Dataset data(file, std::move(vocab), cfg.model.tf_mode);
  if (data.questions(Split::kValid).empty()) {
    data.HoldOutValidation(cfg.valid_stride);
  }
  return data;
}

TrainRun TrainModel(const Dataset& data, const RunConfig& cfg,
                    const EpochCallback& on_epoch) {
  ModelConfig model = cfg.model;
  model.vocab_size = data.vocab().size();
  ModelParams params(model);
  params.Initialize(cfg.train.seed);
  if (!cfg.embeddings.empty()) params.LoadEmbeddings(cfg.embeddings, data.vocab());
  const std::vector<CandidatePool> pools =
      PoolsFor(data, Split::kValid, cfg.pool_k, cfg.train.seed);
  TrainRun run;
  run.result = Train(params, data, pools, cfg.train, on_epoch);
  run.checkpoint.params = run.result.best;
  run.checkpoint.train = cfg.train;
  run.checkpoint.vocab = data.vocab();
  return run;
}

Metrics Evaluate(const ModelParams& params, const Dataset& data, Split split,
                 std::size_t k, std::uint64_t seed, Execution exec) {
  const std::vector<CandidatePool> pools = PoolsFor(data, split, k, seed);
  if (pools.empty()) {
    throw DataError("no " + std::string(SplitName(split)) + " questions");
  }
  Ranker ranker(params, data);
  return Summarize(ranker.RankAll(pools, exec));
}

}  // namespace glqa
