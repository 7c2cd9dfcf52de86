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
#ifndef GLQA_PIPELINE_H_
#define GLQA_PIPELINE_H_

#include <vector>

#include "glqa/checkpoint.h"
#include "glqa/config.h"
#include "glqa/dataset.h"
#include "glqa/evaluation.h"
#include "glqa/training.h"

namespace glqa {

// Builds the vocabulary from the answers and training questions of `file`
// and, when the file has no validation questions, holds out every
// `valid_stride`-th training question.
Dataset PrepareTrainingData(const DatasetFile& file, const RunConfig& cfg);

struct TrainRun {
  Checkpoint checkpoint;  // best-validation parameters
  TrainResult result;
};

// Initializes a model sized to `data`'s vocabulary and trains it with
// validation pools of size cfg.pool_k.
TrainRun TrainModel(const Dataset& data, const RunConfig& cfg,
                    const EpochCallback& on_epoch = {});

// Ranks every pool of `split` and summarizes.
Metrics Evaluate(const ModelParams& params, const Dataset& data, Split split,
                 std::size_t k, std::uint64_t seed,
                 Execution exec = Execution::kParallel);

}  // namespace glqa

#endif  // GLQA_PIPELINE_H_
