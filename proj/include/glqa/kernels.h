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
#ifndef GLQA_KERNELS_H_
#define GLQA_KERNELS_H_

#include <cstddef>

#include "glqa/tensor.h"

// Dense value kernels used by the differentiable ops. Each kernel comes in
// a serial reference form and an OpenMP form; the OpenMP form falls back to
// the serial loop below a work threshold or when already inside a parallel
// region. Results are bitwise identical between the two: every output
// element is reduced in the same order by exactly one thread.
namespace glqa::kernels {

// Multiply-add count above which the OpenMP path spawns threads.
inline constexpr std::size_t kParallelWork = std::size_t{1} << 15;

// out = a * b, out is resized.
void MatMulSerial(const Tensor& a, const Tensor& b, Tensor& out);
void MatMul(const Tensor& a, const Tensor& b, Tensor& out);

// out += a^T * b. a: q x p, b: q x r, out: p x r.
void MatMulTransAAccSerial(const Tensor& a, const Tensor& b, Tensor& out);
void MatMulTransAAcc(const Tensor& a, const Tensor& b, Tensor& out);

// out += a * b^T. a: p x q, b: r x q, out: p x r.
void MatMulTransBAccSerial(const Tensor& a, const Tensor& b, Tensor& out);
void MatMulTransBAcc(const Tensor& a, const Tensor& b, Tensor& out);

// Number of threads the OpenMP paths may use (1 without OpenMP).
int MaxThreads();

}  // namespace glqa::kernels

#endif  // GLQA_KERNELS_H_
