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
#include "glqa/model.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "glqa/rng.h"

namespace glqa {
namespace {

constexpr std::array<std::string_view, kNumParams> kParamNames = {
    "embedding",      "lstm_fwd/input", "lstm_fwd/hidden", "lstm_fwd/bias",
    "lstm_bwd/input", "lstm_bwd/hidden", "lstm_bwd/bias",  "W1",
    "W2",             "W3",             "W4",              "W_ad",
    "W_qd",           "w_ms",           "W_ff"};

void FillUniform(Tensor& t, double limit, Rng& rng) {
  for (double& v : t.data()) v = rng.UniformReal(-limit, limit);
}

void Glorot(Tensor& t, Rng& rng) {
  FillUniform(t, std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols())),
              rng);
}

}  // namespace

std::string_view HeadName(HeadKind head) {
  switch (head) {
    case HeadKind::kGlobalLocal:
      return "global_local";
    case HeadKind::kLocal:
      return "local";
    case HeadKind::kTfLstmConcat:
      return "tf_lstm_concat";
  }
  return "?";
}

HeadKind ParseHead(std::string_view name) {
  if (name == "global_local") return HeadKind::kGlobalLocal;
  if (name == "local") return HeadKind::kLocal;
  if (name == "tf_lstm_concat") return HeadKind::kTfLstmConcat;
  throw std::invalid_argument("unknown head '" + std::string(name) +
                              "' (expected global_local, local or "
                              "tf_lstm_concat)");
}

void ModelConfig::Validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string(name) + " must be >= 1");
  };
  positive(vocab_size, "vocab_size");
  positive(embed_dim, "embed_dim");
  positive(hidden_dim, "hidden_dim");
  positive(tf_dim, "tf_dim");
  positive(local_dim, "local_dim");
  positive(proj_dim, "proj_dim");
  positive(max_len, "max_len");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (vocab_size <= static_cast<std::size_t>(kNumReserved)) {
    throw std::invalid_argument("vocab_size must exceed the reserved ids");
  }
}

std::string_view ParamName(ParamId id) {
  return kParamNames[static_cast<std::size_t>(id)];
}

ModelParams::ModelParams(const ModelConfig& config) : config_(config) {
  config_.Validate();
  const std::size_t v = config.vocab_size;
  const std::size_t e = config.embed_dim;
  const std::size_t h = config.hidden_dim;
  const std::size_t big_h = config.output_dim();
  const std::size_t shapes[kNumParams][2] = {
      {v, e},
      {e, kNumGates * h},
      {h, kNumGates * h},
      {1, kNumGates * h},
      {e, kNumGates * h},
      {h, kNumGates * h},
      {1, kNumGates * h},
      {v, config.tf_dim},
      {big_h, config.local_dim},
      {config.tf_dim + config.local_dim, config.proj_dim},
      {big_h, config.proj_dim},
      {big_h, big_h},
      {big_h, big_h},
      {1, big_h},
      {v, config.tf_dim},
  };
  for (std::size_t i = 0; i < kNumParams; ++i) {
    params_[i] = Parameter(std::string(kParamNames[i]), shapes[i][0],
                           shapes[i][1]);
  }
}

void ModelParams::Initialize(std::uint64_t seed) {
  Rng rng(seed, "init");
  Tensor& emb = (*this)[ParamId::kEmbedding].value;
  FillUniform(emb, 0.1, rng);
  for (double& x : emb.row(kPadId)) x = 0.0;

  const double lim = 1.0 / std::sqrt(static_cast<double>(config_.hidden_dim));
  const std::size_t h = config_.hidden_dim;
  for (ParamId id : {ParamId::kFwdInput, ParamId::kFwdHidden,
                     ParamId::kBwdInput, ParamId::kBwdHidden}) {
    FillUniform((*this)[id].value, lim, rng);
  }
  for (ParamId id : {ParamId::kFwdBias, ParamId::kBwdBias}) {
    Tensor& b = (*this)[id].value;
    b.Fill(0.0);
    for (std::size_t j = h; j < 2 * h; ++j) b[j] = 1.0;
  }
  for (ParamId id : {ParamId::kW1, ParamId::kW2, ParamId::kW3, ParamId::kW4,
                     ParamId::kWad, ParamId::kWqd, ParamId::kWms,
                     ParamId::kWff}) {
    Glorot((*this)[id].value, rng);
  }
}

std::size_t ModelParams::LoadEmbeddings(const std::filesystem::path& path,
                                        const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings " + path.string());
  Tensor& emb = (*this)[ParamId::kEmbedding].value;
  std::size_t replaced = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    if (vals.size() != emb.cols()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(emb.cols()) +
                               " values for '" + word + "', got " +
                               std::to_string(vals.size()));
    }
    const int id = vocab.Id(word);
    if (id == kUnkId || id == kPadId) continue;
    std::copy(vals.begin(), vals.end(), emb.row(id).begin());
    ++replaced;
  }
  return replaced;
}

Parameter* ModelParams::Find(std::string_view name) {
  for (auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

void ModelParams::ZeroGrads() {
  for (auto& p : params_) p.ZeroGrad();
}

std::size_t ModelParams::NumValues() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

Gradients::Gradients(const ModelParams& params) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const Tensor& v = params.all()[i].value;
    grads_[i] = Tensor(v.rows(), v.cols());
  }
}

void Gradients::Zero() {
  for (auto& g : grads_) g.Fill(0.0);
}

void Gradients::Add(const Gradients& o) {
  for (std::size_t i = 0; i < kNumParams; ++i) grads_[i].AddInPlace(o.grads_[i]);
}

void Gradients::Scale(double c) {
  for (auto& g : grads_)
    for (double& x : g.data()) x *= c;
}

Var BoundModel::operator[](ParamId id) {
  auto& slot = bound_[static_cast<std::size_t>(id)];
  if (!slot) {
    const Parameter& p = params_[id];
    Tensor* sink = (grads_ != nullptr && p.requires_grad) ? &(*grads_)[id]
                                                          : nullptr;
    slot = tape_.Param(p.value, sink);
  }
  return *slot;
}

}  // namespace glqa
