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
#ifndef GLQA_TAPE_H_
#define GLQA_TAPE_H_

#include <cstdint>
#include <deque>
#include <functional>

#include "glqa/tensor.h"

namespace glqa {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// lives.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t index = 0;
};

// Reverse-mode gradient recorder.
//
// Every differentiable op appends one record holding its output value and,
// when any input requires a gradient, a closure that pushes the output
// gradient back to the inputs. Records are appended in execution order, so
// the record list is already topologically sorted; Backward() walks it once
// in reverse.
//
// Parameters enter through Param(): the tape references the caller's value
// without copying and accumulates the gradient straight into a caller-owned
// sink. Separate tapes with separate sinks may run on separate threads
// against the same parameter values.
class Tape {
 public:
  using BackwardFn = std::function<void(const Tensor& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  Var Variable(Tensor value);
  // `grad_sink == nullptr` records the parameter as a constant.
  Var Param(const Tensor& value, Tensor* grad_sink);

  // Appends an op result. `backward` is dropped when !requires_grad.
  Var Record(Tensor value, bool requires_grad, BackwardFn backward);

  const Tensor& value(Var v) const { return node(v).value(); }
  bool requires_grad(Var v) const { return node(v).requires_grad; }

  // Gradient slot of `v`, zero-initialized on first access. Backward
  // closures accumulate into it.
  Tensor& GradSlot(Var v);

  // Gradient of a Variable after Backward(); zeros if unreached.
  const Tensor& grad(Var v);

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1 x 1.
  void Backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* external = nullptr;
    Tensor grad;
    Tensor* sink = nullptr;
    bool requires_grad = false;
    bool grad_live = false;
    BackwardFn backward;

    const Tensor& value() const { return external ? *external : owned; }
  };

  const Node& node(Var v) const;
  Node& node(Var v);
  Var Push(Node n);

  std::deque<Node> nodes_;
};

}  // namespace glqa

#endif  // GLQA_TAPE_H_
