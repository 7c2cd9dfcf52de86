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
#ifndef GLQA_DIAGNOSTICS_H_
#define GLQA_DIAGNOSTICS_H_

#include <array>
#include <atomic>
#include <cstddef>
#include <string_view>

namespace glqa {

// Non-fatal numerical events. Degenerate inputs are tolerated so that
// ranking never aborts on an all-UNK text; they are counted here instead.
enum class DiagKind : std::size_t {
  kDegenerateJoin = 0,    // zero-norm part passed through join unscaled
  kDegenerateCosine = 1,  // zero projected vector; raw coefficient set to 0
};

inline constexpr std::size_t kNumDiagKinds = 2;

std::string_view DiagKindName(DiagKind kind);

// Process-wide, thread-safe event counters. The first event of each kind
// is echoed to stderr when verbose.
class Diagnostics {
 public:
  static Diagnostics& Global();

  void Report(DiagKind kind, std::string_view detail);
  std::size_t Count(DiagKind kind) const;
  void Reset();
  void set_verbose(bool v) { verbose_.store(v); }

 private:
  std::array<std::atomic<std::size_t>, kNumDiagKinds> counts_{};
  std::atomic<bool> verbose_{false};
};

}  // namespace glqa

#endif  // GLQA_DIAGNOSTICS_H_
