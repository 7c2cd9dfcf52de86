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
#ifndef GLQA_OPS_H_
#define GLQA_OPS_H_

#include <span>

#include "glqa/tape.h"

// Differentiable primitives. Every op checks shapes, computes its value,
// and records a backward closure on the tape of its first operand. There is
// no implicit broadcasting; BroadcastRows and Scale are the only ways to
// combine mismatched shapes.
namespace glqa {

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);  // elementwise
Var Scale(Var a, double c);
Var MatMul(Var a, Var b);
Var Transpose(Var a);
Var Tanh(Var a);
Var Sigmoid(Var a);
Var Relu(Var a);  // max(0, x), NaN kept; subgradient 0 at the kink

// axis 0 stacks rows (equal column counts); axis 1 joins columns (equal
// row counts). Two 1 x n rows concatenated on axis 1 give one longer row.
Var Concat(Var a, Var b, int axis);
Var SliceCols(Var a, std::size_t begin, std::size_t count);
Var SliceRows(Var a, std::size_t begin, std::size_t count);

Var Sum(Var a);   // 1 x 1
Var Mean(Var a);  // 1 x 1

// Column-wise reductions over rows: 1 x cols.
Var MeanRows(Var a);
Var MaxRows(Var a);  // ties route the gradient to the first maximal row

// Repeats a 1 x c row n times.
Var BroadcastRows(Var row, std::size_t n);

// Numerically stable softmax of a 1 x m row. Throws on m == 0.
Var Softmax(Var row);

// Cosine similarity of two 1 x d rows as a 1 x 1 tensor. Throws
// std::domain_error("degenerate vector in cosine") if either norm is below
// kCosineEps.
inline constexpr double kCosineEps = 1e-12;
Var Cosine(Var u, Var v);

// Cosine of every row of x (n x d) against u (1 x d), as a 1 x n row.
// A degenerate row or u yields 0 and a diagnostic instead of throwing.
Var CosineRows(Var x, Var u);

// Rescales every row of x to Euclidean norm `target`. All-zero rows pass
// through unscaled with a diagnostic.
Var NormalizeRows(Var x, double target);

// Rows `ids` of table, stacked (len(ids) x cols). Row `frozen` (if >= 0)
// receives no gradient.
Var GatherRows(Var table, std::span<const int> ids, int frozen = -1);

// sum_k weights[k] * table[ids[k]] as a 1 x cols row; the sparse form of
// dense_row * table.
Var GatherWeightedSum(Var table, std::span<const int> ids,
                      std::span<const double> weights);

// Plain value helpers (no tape).
double CosineValue(std::span<const double> u, std::span<const double> v);
Tensor SoftmaxValue(const Tensor& row);

}  // namespace glqa

#endif  // GLQA_OPS_H_
