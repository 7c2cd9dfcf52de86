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
#include "glqa/tape.h"

#include <stdexcept>
#include <string>

namespace glqa {

const Tape::Node& Tape::node(Var v) const {
  if (v.tape != this || v.index >= nodes_.size()) {
    throw std::logic_error("tape: variable does not belong to this tape");
  }
  return nodes_[v.index];
}

Tape::Node& Tape::node(Var v) {
  if (v.tape != this || v.index >= nodes_.size()) {
    throw std::logic_error("tape: variable does not belong to this tape");
  }
  return nodes_[v.index];
}

Var Tape::Push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  return Push(std::move(n));
}

Var Tape::Variable(Tensor value) {
  Node n;
  n.owned = std::move(value);
  n.requires_grad = true;
  return Push(std::move(n));
}

Var Tape::Param(const Tensor& value, Tensor* grad_sink) {
  Node n;
  n.external = &value;
  if (grad_sink != nullptr) {
    if (!grad_sink->SameShape(value)) {
      throw ShapeError("param: gradient sink " +
                       ShapeString(grad_sink->shape()) +
                       " does not match value " + ShapeString(value.shape()));
    }
    n.sink = grad_sink;
    n.requires_grad = true;
  }
  return Push(std::move(n));
}

Var Tape::Record(Tensor value, bool requires_grad, BackwardFn backward) {
  Node n;
  n.owned = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  return Push(std::move(n));
}

Tensor& Tape::GradSlot(Var v) {
  Node& n = node(v);
  if (n.sink != nullptr) {
    n.grad_live = true;
    return *n.sink;
  }
  if (!n.grad_live) {
    const Tensor& val = n.value();
    n.grad = Tensor(val.rows(), val.cols());
    n.grad_live = true;
  }
  return n.grad;
}

const Tensor& Tape::grad(Var v) { return GradSlot(v); }

void Tape::Backward(Var loss) {
  const Node& l = node(loss);
  if (l.value().size() != 1) {
    throw ShapeError("backward: loss must be a scalar, got " +
                     ShapeString(l.value().shape()));
  }
  if (!l.requires_grad) return;
  GradSlot(loss)[0] += 1.0;
  for (std::int64_t i = loss.index; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.requires_grad || !n.grad_live || !n.backward) continue;
    n.backward(n.grad);
  }
}

}  // namespace glqa
