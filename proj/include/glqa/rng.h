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
#ifndef GLQA_RNG_H_
#define GLQA_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace glqa {

// Seed of the named substream `name` (and optional index) derived from a
// master seed. All randomness in a run flows from one master seed through
// these substreams ("vocab", "init", "triplets", "pools", "dropout", ...).
std::uint64_t SubstreamSeed(std::uint64_t master, std::string_view name,
                            std::uint64_t index = 0);

// mt19937_64 with distribution helpers built directly on its output words,
// so sampled values do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::string_view stream, std::uint64_t index = 0)
      : engine_(SubstreamSeed(master, stream, index)) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, n). n must be > 0.
  std::size_t Uniform(std::size_t n);
  // Uniform in [0, 1).
  double UniformReal();
  double UniformReal(double lo, double hi) {
    return lo + (hi - lo) * UniformReal();
  }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace glqa

#endif  // GLQA_RNG_H_
