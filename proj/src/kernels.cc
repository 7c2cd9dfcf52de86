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
#include "glqa/kernels.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace glqa::kernels {
namespace {

void CheckMatMul(const char* op, const Shape& a, const Shape& b,
                 std::size_t ia, std::size_t ib) {
  if (a[ia] != b[ib]) {
    throw ShapeError(std::string(op) + ": incompatible shapes " +
                     ShapeString(a) + " and " + ShapeString(b));
  }
}

bool UseThreads(std::size_t work) {
#ifdef _OPENMP
  return work >= kParallelWork && !omp_in_parallel() &&
         omp_get_max_threads() > 1;
#else
  (void)work;
  return false;
#endif
}

// Row r of out = a * b. Inner loop over k is sequential for every element.
inline void MatMulRow(const Tensor& a, const Tensor& b, Tensor& out,
                      std::size_t r) {
  const std::size_t q = a.cols();
  const std::size_t n = b.cols();
  double* o = out.row(r).data();
  for (std::size_t c = 0; c < n; ++c) o[c] = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double av = a(r, k);
    if (av == 0.0) continue;
    const double* brow = b.row(k).data();
    for (std::size_t c = 0; c < n; ++c) o[c] += av * brow[c];
  }
}

inline void TransARow(const Tensor& a, const Tensor& b, Tensor& out,
                      std::size_t p) {
  const std::size_t q = a.rows();
  const std::size_t n = b.cols();
  double* o = out.row(p).data();
  for (std::size_t k = 0; k < q; ++k) {
    const double av = a(k, p);
    if (av == 0.0) continue;
    const double* brow = b.row(k).data();
    for (std::size_t c = 0; c < n; ++c) o[c] += av * brow[c];
  }
}

inline void TransBRow(const Tensor& a, const Tensor& b, Tensor& out,
                      std::size_t r) {
  const std::size_t q = a.cols();
  const double* arow = a.row(r).data();
  double* o = out.row(r).data();
  for (std::size_t c = 0; c < b.rows(); ++c) {
    const double* brow = b.row(c).data();
    double acc = 0.0;
    for (std::size_t k = 0; k < q; ++k) acc += arow[k] * brow[k];
    o[c] += acc;
  }
}

}  // namespace

void MatMulSerial(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul", a.shape(), b.shape(), 1, 0);
  out = Tensor(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) MatMulRow(a, b, out, r);
}

void MatMul(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul", a.shape(), b.shape(), 1, 0);
  out = Tensor(a.rows(), b.cols());
  const long rows = static_cast<long>(a.rows());
  if (!UseThreads(a.rows() * a.cols() * b.cols()) || rows < 2) {
    for (long r = 0; r < rows; ++r) MatMulRow(a, b, out, r);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) MatMulRow(a, b, out, r);
}

void MatMulTransAAccSerial(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul_trans_a", a.shape(), b.shape(), 0, 0);
  if (out.rows() != a.cols() || out.cols() != b.cols()) {
    throw ShapeError("matmul_trans_a: output shape " +
                     ShapeString(out.shape()) + " does not match " +
                     ShapeString({a.cols(), b.cols()}));
  }
  for (std::size_t p = 0; p < a.cols(); ++p) TransARow(a, b, out, p);
}

void MatMulTransAAcc(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul_trans_a", a.shape(), b.shape(), 0, 0);
  if (out.rows() != a.cols() || out.cols() != b.cols()) {
    throw ShapeError("matmul_trans_a: output shape " +
                     ShapeString(out.shape()) + " does not match " +
                     ShapeString({a.cols(), b.cols()}));
  }
  const long rows = static_cast<long>(a.cols());
  if (!UseThreads(a.rows() * a.cols() * b.cols()) || rows < 2) {
    for (long p = 0; p < rows; ++p) TransARow(a, b, out, p);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long p = 0; p < rows; ++p) TransARow(a, b, out, p);
}

void MatMulTransBAccSerial(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul_trans_b", a.shape(), b.shape(), 1, 1);
  if (out.rows() != a.rows() || out.cols() != b.rows()) {
    throw ShapeError("matmul_trans_b: output shape " +
                     ShapeString(out.shape()) + " does not match " +
                     ShapeString({a.rows(), b.rows()}));
  }
  for (std::size_t r = 0; r < a.rows(); ++r) TransBRow(a, b, out, r);
}

void MatMulTransBAcc(const Tensor& a, const Tensor& b, Tensor& out) {
  CheckMatMul("matmul_trans_b", a.shape(), b.shape(), 1, 1);
  if (out.rows() != a.rows() || out.cols() != b.rows()) {
    throw ShapeError("matmul_trans_b: output shape " +
                     ShapeString(out.shape()) + " does not match " +
                     ShapeString({a.rows(), b.rows()}));
  }
  const long rows = static_cast<long>(a.rows());
  if (!UseThreads(a.rows() * a.cols() * b.rows()) || rows < 2) {
    for (long r = 0; r < rows; ++r) TransBRow(a, b, out, r);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) TransBRow(a, b, out, r);
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace glqa::kernels
