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
#include "glqa/diagnostics.h"

#include <iostream>
#include <string>

namespace glqa {

std::string_view DiagKindName(DiagKind kind) {
  switch (kind) {
    case DiagKind::kDegenerateJoin:
      return "degenerate_join";
    case DiagKind::kDegenerateCosine:
      return "degenerate_cosine";
  }
  return "unknown";
}

Diagnostics& Diagnostics::Global() {
  static Diagnostics instance;
  return instance;
}

void Diagnostics::Report(DiagKind kind, std::string_view detail) {
  const auto i = static_cast<std::size_t>(kind);
  const std::size_t before = counts_[i].fetch_add(1);
  if (before == 0 && verbose_.load()) {
    std::cerr << "warning: " << DiagKindName(kind) << ": " << detail
              << " (further occurrences counted silently)\n";
  }
}

std::size_t Diagnostics::Count(DiagKind kind) const {
  return counts_[static_cast<std::size_t>(kind)].load();
}

void Diagnostics::Reset() {
  for (auto& c : counts_) c.store(0);
}

}  // namespace glqa
