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
#ifndef GLQA_MODEL_GRAD_CHECK_H_
#define GLQA_MODEL_GRAD_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "glqa/model.h"

namespace glqa {

inline constexpr double kGradCheckTolerance = 1e-4;

// Denominator floor of the model-level relative error. Central differences
// with step 1e-5 resolve the toy loss to about 3e-11 absolute, while some
// gradients at initialization (W_qd in particular) are around 1e-9, so the
// plain 1e-8 floor would measure round-off rather than the gradient.
inline constexpr double kModelRelErrorFloor = 1e-6;

// v=20, e=8, h_dir=8, b_tf=4, local=8, proj=8.
ModelConfig ToyConfig();

struct GroupCheck {
  std::string group;  // "embedding", "lstm_fwd", "W1", ...
  std::string head;   // head whose loss was differentiated
  double max_rel_error = 0.0;         // floor kModelRelErrorFloor
  double max_rel_error_strict = 0.0;  // floor kRelErrorFloor
  double max_abs_error = 0.0;
  std::size_t coordinates = 0;
  std::string worst;  // "param[index] analytic=... numeric=..."
};

struct ModelGradCheckOptions {
  ModelConfig dims = ToyConfig();
  std::uint64_t seed = 1;
  // The triplet is oriented so that the distractor outscores the correct
  // answer, which keeps the hinge active for any positive margin.
  double margin = 0.2;
  double step = 1e-5;
  // Parameters are redrawn uniformly from [-init_scale, init_scale] (PAD
  // row kept at zero). 0 keeps the training initialization.
  double init_scale = 0.0;
};

// Checks the triplet-loss gradient of every parameter group against central
// differences on random token sequences, with dropout disabled. Encoder and
// global-local groups use the global-local head, W_ad/W_qd/w_ms the local
// head and W_ff the concatenation head.
std::vector<GroupCheck> RunModelGradCheck(const ModelGradCheckOptions& opts);

}  // namespace glqa

#endif  // GLQA_MODEL_GRAD_CHECK_H_
