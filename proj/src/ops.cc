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
#include "glqa/ops.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "glqa/diagnostics.h"
#include "glqa/kernels.h"

namespace glqa {
namespace {

Tape& TapeOf(Var a, Var b, const char* op) {
  if (a.tape == nullptr || a.tape != b.tape) {
    throw std::logic_error(std::string(op) + ": operands on different tapes");
  }
  return *a.tape;
}

void RequireSameShape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.SameShape(b)) {
    throw ShapeError(std::string(op) + ": incompatible shapes " +
                     ShapeString(a.shape()) + " and " +
                     ShapeString(b.shape()));
  }
}

void RequireRow(const char* op, const Tensor& a) {
  if (a.rows() != 1) {
    throw ShapeError(std::string(op) + ": expected a 1 x n row, got " +
                     ShapeString(a.shape()));
  }
}

// Index the next Record() call will receive; lets a closure refer to its
// own output value.
Var NextVar(Tape& t) { return Var{&t, static_cast<std::uint32_t>(t.size())}; }

double Dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double NormOf(std::span<const double> u) { return std::sqrt(Dot(u, u)); }

// y = f(x) elementwise; dy/dx expressed through (x, y).
template <typename F, typename D>
Var Unary(Var a, F f, D deriv) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  Tensor y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const Var self = NextVar(t);
  return t.Record(std::move(y), t.requires_grad(a),
                  [a, self, deriv](const Tensor& g) {
                    Tape& tp = *a.tape;
                    const Tensor& xv = tp.value(a);
                    const Tensor& yv = tp.value(self);
                    Tensor& ga = tp.GradSlot(a);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                      ga[i] += g[i] * deriv(xv[i], yv[i]);
                    }
                  });
}

}  // namespace

Var Add(Var a, Var b) {
  Tape& t = TapeOf(a, b, "add");
  const Tensor& x = t.value(a);
  const Tensor& y = t.value(b);
  RequireSameShape("add", x, y);
  Tensor out = x;
  out.AddInPlace(y);
  return t.Record(std::move(out), t.requires_grad(a) || t.requires_grad(b),
                  [a, b](const Tensor& g) {
                    Tape& tp = *a.tape;
                    if (tp.requires_grad(a)) tp.GradSlot(a).AddInPlace(g);
                    if (tp.requires_grad(b)) tp.GradSlot(b).AddInPlace(g);
                  });
}

Var Sub(Var a, Var b) {
  Tape& t = TapeOf(a, b, "sub");
  const Tensor& x = t.value(a);
  const Tensor& y = t.value(b);
  RequireSameShape("sub", x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  return t.Record(std::move(out), t.requires_grad(a) || t.requires_grad(b),
                  [a, b](const Tensor& g) {
                    Tape& tp = *a.tape;
                    if (tp.requires_grad(a)) tp.GradSlot(a).AddInPlace(g);
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.GradSlot(b);
                      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                    }
                  });
}

Var Mul(Var a, Var b) {
  Tape& t = TapeOf(a, b, "mul");
  const Tensor& x = t.value(a);
  const Tensor& y = t.value(b);
  RequireSameShape("mul", x, y);
  Tensor out(x.rows(), x.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  return t.Record(std::move(out), t.requires_grad(a) || t.requires_grad(b),
                  [a, b](const Tensor& g) {
                    Tape& tp = *a.tape;
                    const Tensor& xv = tp.value(a);
                    const Tensor& yv = tp.value(b);
                    if (tp.requires_grad(a)) {
                      Tensor& ga = tp.GradSlot(a);
                      for (std::size_t i = 0; i < g.size(); ++i)
                        ga[i] += g[i] * yv[i];
                    }
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.GradSlot(b);
                      for (std::size_t i = 0; i < g.size(); ++i)
                        gb[i] += g[i] * xv[i];
                    }
                  });
}

Var Scale(Var a, double c) {
  Tape& t = *a.tape;
  Tensor out = t.value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= c;
  return t.Record(std::move(out), t.requires_grad(a), [a, c](const Tensor& g) {
    Tensor& ga = a.tape->GradSlot(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  });
}

Var MatMul(Var a, Var b) {
  Tape& t = TapeOf(a, b, "matmul");
  Tensor out;
  kernels::MatMul(t.value(a), t.value(b), out);
  return t.Record(std::move(out), t.requires_grad(a) || t.requires_grad(b),
                  [a, b](const Tensor& g) {
                    Tape& tp = *a.tape;
                    // dA = G * B^T, dB = A^T * G
                    if (tp.requires_grad(a)) {
                      kernels::MatMulTransBAcc(g, tp.value(b), tp.GradSlot(a));
                    }
                    if (tp.requires_grad(b)) {
                      kernels::MatMulTransAAcc(tp.value(a), g, tp.GradSlot(b));
                    }
                  });
}

Var Transpose(Var a) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  Tensor out(x.cols(), x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(c, r) = x(r, c);
  return t.Record(std::move(out), t.requires_grad(a), [a](const Tensor& g) {
    Tensor& ga = a.tape->GradSlot(a);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(c, r) += g(r, c);
  });
}

Var Tanh(Var a) {
  return Unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var Sigmoid(Var a) {
  return Unary(
      a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double, double y) { return y * (1.0 - y); });
}

Var Relu(Var a) {
  return Unary(
      a, [](double x) { return x > 0.0 || std::isnan(x) ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var Concat(Var a, Var b, int axis) {
  Tape& t = TapeOf(a, b, "concat");
  const Tensor& x = t.value(a);
  const Tensor& y = t.value(b);
  Tensor out;
  if (axis == 0) {
    if (x.cols() != y.cols()) {
      throw ShapeError("concat(axis=0): incompatible shapes " +
                       ShapeString(x.shape()) + " and " +
                       ShapeString(y.shape()));
    }
    out = Tensor(x.rows() + y.rows(), x.cols());
    std::copy(x.data().begin(), x.data().end(), out.data().begin());
    std::copy(y.data().begin(), y.data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(x.size()));
  } else if (axis == 1) {
    if (x.rows() != y.rows()) {
      throw ShapeError("concat(axis=1): incompatible shapes " +
                       ShapeString(x.shape()) + " and " +
                       ShapeString(y.shape()));
    }
    out = Tensor(x.rows(), x.cols() + y.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto o = out.row(r);
      std::copy(x.row(r).begin(), x.row(r).end(), o.begin());
      std::copy(y.row(r).begin(), y.row(r).end(),
                o.begin() + static_cast<std::ptrdiff_t>(x.cols()));
    }
  } else {
    throw std::invalid_argument("concat: axis must be 0 or 1");
  }
  return t.Record(
      std::move(out), t.requires_grad(a) || t.requires_grad(b),
      [a, b, axis](const Tensor& g) {
        Tape& tp = *a.tape;
        const Tensor& xv = tp.value(a);
        if (axis == 0) {
          const std::size_t split = xv.size();
          if (tp.requires_grad(a)) {
            Tensor& ga = tp.GradSlot(a);
            for (std::size_t i = 0; i < split; ++i) ga[i] += g[i];
          }
          if (tp.requires_grad(b)) {
            Tensor& gb = tp.GradSlot(b);
            for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[split + i];
          }
        } else {
          const std::size_t xc = xv.cols();
          const std::size_t yc = g.cols() - xc;
          for (std::size_t r = 0; r < g.rows(); ++r) {
            if (tp.requires_grad(a)) {
              Tensor& ga = tp.GradSlot(a);
              for (std::size_t c = 0; c < xc; ++c) ga(r, c) += g(r, c);
            }
            if (tp.requires_grad(b)) {
              Tensor& gb = tp.GradSlot(b);
              for (std::size_t c = 0; c < yc; ++c) gb(r, c) += g(r, xc + c);
            }
          }
        }
      });
}

Var SliceCols(Var a, std::size_t begin, std::size_t count) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  if (begin + count > x.cols()) {
    throw ShapeError("slice_cols: columns [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " +
                     ShapeString(x.shape()));
  }
  Tensor out(x.rows(), count);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = x(r, begin + c);
  return t.Record(std::move(out), t.requires_grad(a),
                  [a, begin, count](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t r = 0; r < g.rows(); ++r)
                      for (std::size_t c = 0; c < count; ++c)
                        ga(r, begin + c) += g(r, c);
                  });
}

Var SliceRows(Var a, std::size_t begin, std::size_t count) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  if (begin + count > x.rows()) {
    throw ShapeError("slice_rows: rows [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " +
                     ShapeString(x.shape()));
  }
  Tensor out(count, x.cols());
  for (std::size_t r = 0; r < count; ++r)
    std::copy(x.row(begin + r).begin(), x.row(begin + r).end(),
              out.row(r).begin());
  return t.Record(std::move(out), t.requires_grad(a),
                  [a, begin](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t r = 0; r < g.rows(); ++r)
                      for (std::size_t c = 0; c < g.cols(); ++c)
                        ga(begin + r, c) += g(r, c);
                  });
}

Var Sum(Var a) {
  Tape& t = *a.tape;
  double s = 0.0;
  for (double v : t.value(a).data()) s += v;
  return t.Record(Tensor::Scalar(s), t.requires_grad(a),
                  [a](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[0];
                  });
}

Var Mean(Var a) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  if (x.empty()) throw ShapeError("mean: empty tensor");
  double s = 0.0;
  for (double v : x.data()) s += v;
  const double inv = 1.0 / static_cast<double>(x.size());
  return t.Record(Tensor::Scalar(s * inv), t.requires_grad(a),
                  [a, inv](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t i = 0; i < ga.size(); ++i)
                      ga[i] += g[0] * inv;
                  });
}

Var MeanRows(Var a) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  if (x.rows() == 0) throw ShapeError("mean_rows: no rows");
  Tensor out(1, x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out[c] += x(r, c);
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (double& v : out.data()) v *= inv;
  return t.Record(std::move(out), t.requires_grad(a),
                  [a, inv](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t r = 0; r < ga.rows(); ++r)
                      for (std::size_t c = 0; c < ga.cols(); ++c)
                        ga(r, c) += g[c] * inv;
                  });
}

Var MaxRows(Var a) {
  Tape& t = *a.tape;
  const Tensor& x = t.value(a);
  if (x.rows() == 0) throw ShapeError("max_rows: no rows");
  Tensor out(1, x.cols());
  std::vector<std::size_t> arg(x.cols(), 0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    out[c] = x(0, c);
    for (std::size_t r = 1; r < x.rows(); ++r) {
      if (x(r, c) > out[c]) {
        out[c] = x(r, c);
        arg[c] = r;
      }
    }
  }
  return t.Record(std::move(out), t.requires_grad(a),
                  [a, arg = std::move(arg)](const Tensor& g) {
                    Tensor& ga = a.tape->GradSlot(a);
                    for (std::size_t c = 0; c < arg.size(); ++c)
                      ga(arg[c], c) += g[c];
                  });
}

Var BroadcastRows(Var row, std::size_t n) {
  Tape& t = *row.tape;
  const Tensor& x = t.value(row);
  RequireRow("broadcast_rows", x);
  Tensor out(n, x.cols());
  for (std::size_t r = 0; r < n; ++r)
    std::copy(x.data().begin(), x.data().end(), out.row(r).begin());
  return t.Record(std::move(out), t.requires_grad(row),
                  [row](const Tensor& g) {
                    Tensor& gr = row.tape->GradSlot(row);
                    for (std::size_t r = 0; r < g.rows(); ++r)
                      for (std::size_t c = 0; c < g.cols(); ++c)
                        gr[c] += g(r, c);
                  });
}

Tensor SoftmaxValue(const Tensor& row) {
  RequireRow("softmax", row);
  if (row.cols() == 0) throw ShapeError("softmax: empty input");
  double mx = row[0];
  for (double v : row.data()) mx = std::max(mx, v);
  Tensor out(1, row.cols());
  double z = 0.0;
  for (std::size_t i = 0; i < row.cols(); ++i) {
    out[i] = std::exp(row[i] - mx);
    z += out[i];
  }
  for (double& v : out.data()) v /= z;
  return out;
}

Var Softmax(Var row) {
  Tape& t = *row.tape;
  const Var self = NextVar(t);
  return t.Record(SoftmaxValue(t.value(row)), t.requires_grad(row),
                  [row, self](const Tensor& g) {
                    Tape& tp = *row.tape;
                    const Tensor& y = tp.value(self);
                    const double gy = Dot(g.data(), y.data());
                    Tensor& gr = tp.GradSlot(row);
                    for (std::size_t i = 0; i < y.size(); ++i)
                      gr[i] += y[i] * (g[i] - gy);
                  });
}

double CosineValue(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ShapeError("cosine: incompatible lengths " +
                     std::to_string(u.size()) + " and " +
                     std::to_string(v.size()));
  }
  const double nu = NormOf(u);
  const double nv = NormOf(v);
  if (nu <= kCosineEps || nv <= kCosineEps) {
    throw std::domain_error("degenerate vector in cosine");
  }
  return Dot(u, v) / (nu * nv);
}

Var Cosine(Var u, Var v) {
  Tape& t = TapeOf(u, v, "cosine");
  const Tensor& x = t.value(u);
  const Tensor& y = t.value(v);
  RequireRow("cosine", x);
  RequireSameShape("cosine", x, y);
  const double c = CosineValue(x.data(), y.data());
  return t.Record(
      Tensor::Scalar(c), t.requires_grad(u) || t.requires_grad(v),
      [u, v, c](const Tensor& g) {
        Tape& tp = *u.tape;
        const Tensor& xv = tp.value(u);
        const Tensor& yv = tp.value(v);
        const double nx = xv.Norm();
        const double ny = yv.Norm();
        // d cos / dx = y / (|x||y|) - cos * x / |x|^2
        if (tp.requires_grad(u)) {
          Tensor& gu = tp.GradSlot(u);
          for (std::size_t i = 0; i < xv.size(); ++i)
            gu[i] += g[0] * (yv[i] / (nx * ny) - c * xv[i] / (nx * nx));
        }
        if (tp.requires_grad(v)) {
          Tensor& gv = tp.GradSlot(v);
          for (std::size_t i = 0; i < yv.size(); ++i)
            gv[i] += g[0] * (xv[i] / (nx * ny) - c * yv[i] / (ny * ny));
        }
      });
}

Var CosineRows(Var x, Var u) {
  Tape& t = TapeOf(x, u, "cosine_rows");
  const Tensor& xv = t.value(x);
  const Tensor& uv = t.value(u);
  RequireRow("cosine_rows", uv);
  if (xv.cols() != uv.cols()) {
    throw ShapeError("cosine_rows: incompatible shapes " +
                     ShapeString(xv.shape()) + " and " +
                     ShapeString(uv.shape()));
  }
  const double nu = uv.Norm();
  Tensor out(1, xv.rows());
  std::vector<double> norms(xv.rows());
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    norms[r] = NormOf(xv.row(r));
    if (nu <= kCosineEps || norms[r] <= kCosineEps) {
      Diagnostics::Global().Report(DiagKind::kDegenerateCosine,
                                   "zero projected vector in attention");
      out[r] = 0.0;
      continue;
    }
    out[r] = Dot(xv.row(r), uv.data()) / (norms[r] * nu);
  }
  const Var self = NextVar(t);
  return t.Record(
      std::move(out), t.requires_grad(x) || t.requires_grad(u),
      [x, u, self, nu, norms = std::move(norms)](const Tensor& g) {
        Tape& tp = *x.tape;
        const Tensor& xv2 = tp.value(x);
        const Tensor& uv2 = tp.value(u);
        const Tensor& c = tp.value(self);
        if (nu <= kCosineEps) return;
        for (std::size_t r = 0; r < xv2.rows(); ++r) {
          const double nx = norms[r];
          if (nx <= kCosineEps) continue;
          const auto xr = xv2.row(r);
          if (tp.requires_grad(x)) {
            auto gx = tp.GradSlot(x).row(r);
            for (std::size_t i = 0; i < xr.size(); ++i)
              gx[i] += g[r] * (uv2[i] / (nx * nu) - c[r] * xr[i] / (nx * nx));
          }
          if (tp.requires_grad(u)) {
            Tensor& gu = tp.GradSlot(u);
            for (std::size_t i = 0; i < xr.size(); ++i)
              gu[i] += g[r] * (xr[i] / (nx * nu) - c[r] * uv2[i] / (nu * nu));
          }
        }
      });
}

Var NormalizeRows(Var x, double target) {
  Tape& t = *x.tape;
  const Tensor& xv = t.value(x);
  Tensor out = xv;
  std::vector<double> norms(xv.rows());
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    norms[r] = NormOf(xv.row(r));
    if (norms[r] == 0.0) {
      Diagnostics::Global().Report(DiagKind::kDegenerateJoin,
                                   "zero-norm part passed through join");
      continue;
    }
    const double s = target / norms[r];
    for (double& v : out.row(r)) v *= s;
  }
  return t.Record(
      std::move(out), t.requires_grad(x),
      [x, target, norms = std::move(norms)](const Tensor& g) {
        Tape& tp = *x.tape;
        const Tensor& xv2 = tp.value(x);
        Tensor& gx = tp.GradSlot(x);
        for (std::size_t r = 0; r < xv2.rows(); ++r) {
          const auto xr = xv2.row(r);
          const auto gr = g.row(r);
          auto dst = gx.row(r);
          if (norms[r] == 0.0) {
            for (std::size_t i = 0; i < xr.size(); ++i) dst[i] += gr[i];
            continue;
          }
          // d(t x/|x|)/dx = (t/|x|) (I - x x^T/|x|^2)
          const double n = norms[r];
          const double proj = Dot(xr, gr) / (n * n);
          for (std::size_t i = 0; i < xr.size(); ++i)
            dst[i] += (target / n) * (gr[i] - proj * xr[i]);
        }
      });
}

Var GatherRows(Var table, std::span<const int> ids, int frozen) {
  Tape& t = *table.tape;
  const Tensor& w = t.value(table);
  Tensor out(ids.size(), w.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= w.rows()) {
      throw ShapeError("gather_rows: id " + std::to_string(ids[r]) +
                       " out of range for " + ShapeString(w.shape()));
    }
    std::copy(w.row(ids[r]).begin(), w.row(ids[r]).end(), out.row(r).begin());
  }
  return t.Record(std::move(out), t.requires_grad(table),
                  [table, idv = std::vector<int>(ids.begin(), ids.end()),
                   frozen](const Tensor& g) {
                    Tensor& gw = table.tape->GradSlot(table);
                    for (std::size_t r = 0; r < idv.size(); ++r) {
                      if (idv[r] == frozen) continue;
                      auto dst = gw.row(idv[r]);
                      const auto src = g.row(r);
                      for (std::size_t c = 0; c < dst.size(); ++c)
                        dst[c] += src[c];
                    }
                  });
}

Var GatherWeightedSum(Var table, std::span<const int> ids,
                      std::span<const double> weights) {
  Tape& t = *table.tape;
  const Tensor& w = t.value(table);
  if (ids.size() != weights.size()) {
    throw ShapeError("gather_weighted_sum: " + std::to_string(ids.size()) +
                     " ids but " + std::to_string(weights.size()) +
                     " weights");
  }
  Tensor out(1, w.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] < 0 || static_cast<std::size_t>(ids[k]) >= w.rows()) {
      throw ShapeError("gather_weighted_sum: id " + std::to_string(ids[k]) +
                       " out of range for " + ShapeString(w.shape()));
    }
    const auto src = w.row(ids[k]);
    for (std::size_t c = 0; c < src.size(); ++c) out[c] += weights[k] * src[c];
  }
  return t.Record(std::move(out), t.requires_grad(table),
                  [table, idv = std::vector<int>(ids.begin(), ids.end()),
                   wv = std::vector<double>(weights.begin(), weights.end())](
                      const Tensor& g) {
                    Tensor& gw = table.tape->GradSlot(table);
                    for (std::size_t k = 0; k < idv.size(); ++k) {
                      auto dst = gw.row(idv[k]);
                      for (std::size_t c = 0; c < dst.size(); ++c)
                        dst[c] += wv[k] * g[c];
                    }
                  });
}

}  // namespace glqa
