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
#ifndef GLQA_CHECKPOINT_H_
#define GLQA_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "glqa/model.h"
#include "glqa/text.h"
#include "glqa/training.h"

namespace glqa {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary container:
//   "GLQACKPT" | u32 version | u64 n | n bytes of JSON (model config, train
//   config, vocabulary words) | u32 tensor count | per tensor: u32 name
//   length, name, u64 rows, u64 cols, rows*cols little-endian f64 values.
struct Checkpoint {
  ModelParams params;
  TrainConfig train;
  Vocabulary vocab;

  std::string Serialize() const;
  static Checkpoint Deserialize(const std::string& bytes,
                                const std::string& source = "<checkpoint>");

  void Save(const std::filesystem::path& path) const;
  static Checkpoint Load(const std::filesystem::path& path);
};

}  // namespace glqa

#endif  // GLQA_CHECKPOINT_H_
