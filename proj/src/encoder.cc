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
#include "glqa/encoder.h"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "glqa/kernels.h"
#include "glqa/ops.h"

namespace glqa {
namespace {

inline double Sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct LstmShapes {
  std::size_t m, e, h;
};

LstmShapes CheckLstm(const Tensor& x, const Tensor& wi, const Tensor& wh,
                     const Tensor& b) {
  const std::size_t h = wh.rows();
  if (wi.rows() != x.cols() || wi.cols() != kNumGates * h) {
    throw ShapeError("lstm: incompatible shapes " + ShapeString(x.shape()) +
                     " and " + ShapeString(wi.shape()));
  }
  if (wh.cols() != kNumGates * h) {
    throw ShapeError("lstm: hidden weights " + ShapeString(wh.shape()) +
                     " are not h x 4h");
  }
  if (b.rows() != 1 || b.cols() != kNumGates * h) {
    throw ShapeError("lstm: bias " + ShapeString(b.shape()) +
                     " is not 1 x 4h for h = " + std::to_string(h));
  }
  return {x.rows(), x.cols(), h};
}

// Activations saved by the forward sweep, indexed by timestep.
struct LstmCache {
  Tensor gates;   // m x 4h, post-activation [i | f | o | g]
  Tensor cells;   // m x h
  Tensor tanh_c;  // m x h
  Tensor hidden;  // m x h
};

}  // namespace

Var Embed(BoundModel& model, std::span<const int> ids) {
  if (ids.empty()) {
    throw std::invalid_argument("cannot encode empty sequence");
  }
  return GatherRows(model[ParamId::kEmbedding], ids, kPadId);
}

Var LstmDirection(Var x, Var w_input, Var w_hidden, Var bias, bool reverse) {
  Tape& t = *x.tape;
  const Tensor& xv = t.value(x);
  const Tensor& wi = t.value(w_input);
  const Tensor& wh = t.value(w_hidden);
  const Tensor& bv = t.value(bias);
  const auto [m, e, h] = CheckLstm(xv, wi, wh, bv);
  const std::size_t g4 = kNumGates * h;

  Tensor z;
  kernels::MatMul(xv, wi, z);
  auto cache = std::make_shared<LstmCache>();
  cache->gates = Tensor(m, g4);
  cache->cells = Tensor(m, h);
  cache->tanh_c = Tensor(m, h);
  cache->hidden = Tensor(m, h);

  std::vector<double> zt(g4);
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t tt = reverse ? m - 1 - s : s;
    const bool has_prev = s > 0;
    const std::size_t prev = reverse ? tt + 1 : tt - 1;
    for (std::size_t j = 0; j < g4; ++j) zt[j] = z(tt, j) + bv[j];
    if (has_prev) {
      for (std::size_t k = 0; k < h; ++k) {
        const double hk = cache->hidden(prev, k);
        if (hk == 0.0) continue;
        const double* wrow = wh.row(k).data();
        for (std::size_t j = 0; j < g4; ++j) zt[j] += hk * wrow[j];
      }
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double i = Sigm(zt[j]);
      const double f = Sigm(zt[h + j]);
      const double o = Sigm(zt[2 * h + j]);
      const double g = std::tanh(zt[3 * h + j]);
      const double c_prev = has_prev ? cache->cells(prev, j) : 0.0;
      const double c = f * c_prev + i * g;
      const double tc = std::tanh(c);
      cache->gates(tt, j) = i;
      cache->gates(tt, h + j) = f;
      cache->gates(tt, 2 * h + j) = o;
      cache->gates(tt, 3 * h + j) = g;
      cache->cells(tt, j) = c;
      cache->tanh_c(tt, j) = tc;
      cache->hidden(tt, j) = o * tc;
    }
  }

  const bool needs_grad = t.requires_grad(x) || t.requires_grad(w_input) ||
                          t.requires_grad(w_hidden) || t.requires_grad(bias);
  Tensor out = cache->hidden;
  return t.Record(
      std::move(out), needs_grad,
      [x, w_input, w_hidden, bias, reverse, cache, m = m, h = h,
       g4](const Tensor& grad_out) {
        Tape& tp = *x.tape;
        const Tensor& wh2 = tp.value(w_hidden);
        Tensor dz(m, g4);
        std::vector<double> dh_next(h, 0.0);
        std::vector<double> dc_next(h, 0.0);
        const bool grad_wh = tp.requires_grad(w_hidden);
        for (std::size_t s = m; s-- > 0;) {
          const std::size_t tt = reverse ? m - 1 - s : s;
          const bool has_prev = s > 0;
          const std::size_t prev = reverse ? tt + 1 : tt - 1;
          double* dzr = dz.row(tt).data();
          for (std::size_t j = 0; j < h; ++j) {
            const double i = cache->gates(tt, j);
            const double f = cache->gates(tt, h + j);
            const double o = cache->gates(tt, 2 * h + j);
            const double g = cache->gates(tt, 3 * h + j);
            const double tc = cache->tanh_c(tt, j);
            const double c_prev = has_prev ? cache->cells(prev, j) : 0.0;
            const double dh = grad_out(tt, j) + dh_next[j];
            const double d_o = dh * tc;
            const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
            dc_next[j] = dc * f;
            dzr[j] = dc * g * i * (1.0 - i);
            dzr[h + j] = dc * c_prev * f * (1.0 - f);
            dzr[2 * h + j] = d_o * o * (1.0 - o);
            dzr[3 * h + j] = dc * i * (1.0 - g * g);
          }
          if (!has_prev) break;
          if (grad_wh) {
            Tensor& gwh = tp.GradSlot(w_hidden);
            for (std::size_t k = 0; k < h; ++k) {
              const double hk = cache->hidden(prev, k);
              if (hk == 0.0) continue;
              double* grow = gwh.row(k).data();
              for (std::size_t j = 0; j < g4; ++j) grow[j] += hk * dzr[j];
            }
          }
          for (std::size_t k = 0; k < h; ++k) {
            const double* wrow = wh2.row(k).data();
            double acc = 0.0;
            for (std::size_t j = 0; j < g4; ++j) acc += wrow[j] * dzr[j];
            dh_next[k] = acc;
          }
        }
        if (tp.requires_grad(w_input)) {
          kernels::MatMulTransAAcc(tp.value(x), dz, tp.GradSlot(w_input));
        }
        if (tp.requires_grad(bias)) {
          Tensor& gb = tp.GradSlot(bias);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < g4; ++j) gb[j] += dz(r, j);
        }
        if (tp.requires_grad(x)) {
          kernels::MatMulTransBAcc(dz, tp.value(w_input), tp.GradSlot(x));
        }
      });
}

Var LstmDirectionReference(Var x, Var w_input, Var w_hidden, Var bias,
                           bool reverse) {
  Tape& t = *x.tape;
  const auto [m, e, h] = CheckLstm(t.value(x), t.value(w_input),
                                   t.value(w_hidden), t.value(bias));
  Var z = Add(MatMul(x, w_input), BroadcastRows(bias, m));
  std::vector<Var> hs(m);
  Var h_prev{};
  Var c_prev{};
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t tt = reverse ? m - 1 - s : s;
    Var zt = SliceRows(z, tt, 1);
    if (s > 0) zt = Add(zt, MatMul(h_prev, w_hidden));
    Var i = Sigmoid(SliceCols(zt, 0, h));
    Var f = Sigmoid(SliceCols(zt, h, h));
    Var o = Sigmoid(SliceCols(zt, 2 * h, h));
    Var g = Tanh(SliceCols(zt, 3 * h, h));
    Var c = Mul(i, g);
    if (s > 0) c = Add(Mul(f, c_prev), c);
    Var hv = Mul(o, Tanh(c));
    hs[tt] = hv;
    h_prev = hv;
    c_prev = c;
  }
  Var out = hs[0];
  for (std::size_t r = 1; r < m; ++r) out = Concat(out, hs[r], 0);
  return out;
}

Var BiLstm(BoundModel& model, Var embedded) {
  Var fwd = LstmDirection(embedded, model[ParamId::kFwdInput],
                          model[ParamId::kFwdHidden], model[ParamId::kFwdBias],
                          /*reverse=*/false);
  Var bwd = LstmDirection(embedded, model[ParamId::kBwdInput],
                          model[ParamId::kBwdHidden], model[ParamId::kBwdBias],
                          /*reverse=*/true);
  return Concat(fwd, bwd, 1);
}

Var MeanPool(Var encoded) { return MeanRows(encoded); }

Var MaxPool(Var encoded) { return MaxRows(encoded); }

Var EncodeSequence(BoundModel& model, std::span<const int> ids,
                   const DropoutSpec& dropout) {
  const std::size_t max_len = model.config().max_len;
  if (ids.size() > max_len) ids = ids.first(max_len);
  Var out = BiLstm(model, Embed(model, ids));
  if (dropout.keep_prob < 1.0 && dropout.rng != nullptr) {
    const Tensor& v = model.tape().value(out);
    Tensor mask(v.rows(), v.cols());
    const double inv = 1.0 / dropout.keep_prob;
    for (double& x : mask.data())
      x = dropout.rng->UniformReal() < dropout.keep_prob ? inv : 0.0;
    out = Mul(out, model.tape().Constant(std::move(mask)));
  }
  return out;
}

EncodedQuestion EncodeQuestion(BoundModel& model, std::span<const int> ids,
                               const DropoutSpec& dropout) {
  Var outputs = EncodeSequence(model, ids, dropout);
  return {outputs, MeanPool(outputs)};
}

}  // namespace glqa
