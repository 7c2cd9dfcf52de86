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
#ifndef GLQA_GRAD_CHECK_H_
#define GLQA_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "glqa/tape.h"

namespace glqa {

inline constexpr double kGradCheckStep = 1e-5;

inline constexpr double kRelErrorFloor = 1e-8;

// |a - n| / max(|a|, |n|, floor)
double RelativeError(double analytic, double numeric,
                     double floor = kRelErrorFloor);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double max_abs_error = 0.0;
};

// Central differences of `f` around `point` (perturbed in place and
// restored).
std::vector<double> NumericGradient(const std::function<double()>& f,
                                    std::span<double> point,
                                    double step = kGradCheckStep);

GradCheckResult CompareGradients(std::span<const double> analytic,
                                 std::span<const double> numeric,
                                 double floor = kRelErrorFloor);

// Central differences of `f` around `point` (perturbed in place and
// restored), compared coordinate-wise with `analytic`.
GradCheckResult CheckGradient(const std::function<double()>& f,
                              std::span<double> point,
                              std::span<const double> analytic,
                              double step = kGradCheckStep,
                              double floor = kRelErrorFloor);

// Convenience for single-input expressions: `build` maps an input Var on a
// fresh tape to a scalar Var. The analytic side comes from Tape::Backward.
GradCheckResult CheckGradient(const std::function<Var(Var)>& build,
                              const Tensor& at, double step = kGradCheckStep);

}  // namespace glqa

#endif  // GLQA_GRAD_CHECK_H_
