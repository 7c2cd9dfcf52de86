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
#include "glqa/grad_check.h"

#include <algorithm>
#include <cmath>

namespace glqa {

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

std::vector<double> NumericGradient(const std::function<double()>& f,
                                    std::span<double> point, double step) {
  std::vector<double> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double orig = point[i];
    point[i] = orig + step;
    const double fp = f();
    point[i] = orig - step;
    const double fm = f();
    point[i] = orig;
    out[i] = (fp - fm) / (2.0 * step);
  }
  return out;
}

GradCheckResult CompareGradients(std::span<const double> analytic,
                                 std::span<const double> numeric,
                                 double floor) {
  if (numeric.size() != analytic.size()) {
    throw ShapeError("grad_check: analytic and numeric lengths differ");
  }
  GradCheckResult res;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double err = RelativeError(analytic[i], numeric[i], floor);
    res.max_abs_error =
        std::max(res.max_abs_error, std::abs(analytic[i] - numeric[i]));
    if (i == 0 || err > res.max_rel_error) {
      res.max_rel_error = err;
      res.worst_index = i;
      res.analytic = analytic[i];
      res.numeric = numeric[i];
    }
  }
  return res;
}

GradCheckResult CheckGradient(const std::function<double()>& f,
                              std::span<double> point,
                              std::span<const double> analytic, double step,
                              double floor) {
  if (point.size() != analytic.size()) {
    throw ShapeError("grad_check: point and gradient lengths differ");
  }
  return CompareGradients(analytic, NumericGradient(f, point, step), floor);
}

GradCheckResult CheckGradient(const std::function<Var(Var)>& build,
                              const Tensor& at, double step) {
  Tensor point = at;
  Tensor analytic;
  {
    Tape tape;
    Var x = tape.Variable(point);
    Var loss = build(x);
    tape.Backward(loss);
    analytic = tape.grad(x);
  }
  auto f = [&]() {
    Tape tape;
    Var x = tape.Constant(point);
    return tape.value(build(x)).item();
  };
  return CheckGradient(f, point.data(), analytic.data(), step);
}

}  // namespace glqa
