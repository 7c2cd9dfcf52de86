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
#ifndef GLQA_MODEL_H_
#define GLQA_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glqa/tape.h"
#include "glqa/tensor.h"
#include "glqa/text.h"

namespace glqa {

// Representation head used to score a (question, answer) pair.
enum class HeadKind {
  kGlobalLocal,   // TF-aware attention, TF+RNN joined final representations
  kLocal,         // attention from answer timestep and question vector only
  kTfLstmConcat,  // no attention: tanh(TF projection) || mean-pooled LSTM
};

std::string_view HeadName(HeadKind head);
HeadKind ParseHead(std::string_view name);

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 100;
  std::size_t hidden_dim = 141;  // per LSTM direction
  std::size_t tf_dim = 50;       // global TF projection
  std::size_t local_dim = 140;   // local projection of each timestep
  std::size_t proj_dim = 140;    // shared space of the attention cosine
  double alpha = 0.5;            // norm of the TF part in a joined vector
  double beta = 1.0;             // norm of the RNN part in a joined vector
  std::size_t max_len = 200;     // longer sequences are cut at the tail
  HeadKind head = HeadKind::kGlobalLocal;
  TfMode tf_mode = TfMode::kBinary;

  std::size_t output_dim() const { return 2 * hidden_dim; }
  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

enum class ParamId : std::size_t {
  kEmbedding,
  kFwdInput,
  kFwdHidden,
  kFwdBias,
  kBwdInput,
  kBwdHidden,
  kBwdBias,
  kW1,   // vocab x tf_dim
  kW2,   // output_dim x local_dim
  kW3,   // (tf_dim + local_dim) x proj_dim
  kW4,   // output_dim x proj_dim
  kWad,  // output_dim x output_dim
  kWqd,  // output_dim x output_dim
  kWms,  // 1 x output_dim
  kWff,  // vocab x tf_dim, TF-LSTM concatenation head
};

inline constexpr std::size_t kNumParams = 15;

// Gate layout of the packed LSTM matrices: [input | forget | output | cand].
inline constexpr std::size_t kNumGates = 4;

// All learnable weights. Matrices are stored so that projections are row
// vector times matrix: x (1 x in) * W (in x out).
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(const ModelConfig& config);

  // Embeddings U(-0.1, 0.1) with a zero PAD row; LSTM weights
  // U(-1/sqrt(h), 1/sqrt(h)) with forget bias 1 and other biases 0;
  // projections Glorot-uniform.
  void Initialize(std::uint64_t seed);

  // Overwrites embedding rows of listed words from a text file of
  // `word v1 ... ve` lines. Returns how many rows were replaced.
  std::size_t LoadEmbeddings(const std::filesystem::path& path,
                             const Vocabulary& vocab);

  const ModelConfig& config() const { return config_; }
  Parameter& operator[](ParamId id) {
    return params_[static_cast<std::size_t>(id)];
  }
  const Parameter& operator[](ParamId id) const {
    return params_[static_cast<std::size_t>(id)];
  }
  std::array<Parameter, kNumParams>& all() { return params_; }
  const std::array<Parameter, kNumParams>& all() const { return params_; }
  Parameter* Find(std::string_view name);

  void ZeroGrads();
  std::size_t NumValues() const;

 private:
  ModelConfig config_;
  std::array<Parameter, kNumParams> params_;
};

std::string_view ParamName(ParamId id);

// Parameter-shaped gradient accumulators, one tensor per ParamId.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ModelParams& params);

  Tensor& operator[](ParamId id) { return grads_[static_cast<std::size_t>(id)]; }
  const Tensor& operator[](ParamId id) const {
    return grads_[static_cast<std::size_t>(id)];
  }
  std::array<Tensor, kNumParams>& all() { return grads_; }
  const std::array<Tensor, kNumParams>& all() const { return grads_; }

  void Zero();
  void Add(const Gradients& o);
  void Scale(double c);

 private:
  std::array<Tensor, kNumParams> grads_;
};

// Model parameters placed on one tape. Each parameter is registered on
// first use, as a constant when `grads` is null or as a gradient-producing
// leaf accumulating into `grads` otherwise.
class BoundModel {
 public:
  BoundModel(Tape& tape, const ModelParams& params, Gradients* grads)
      : tape_(tape), params_(params), grads_(grads) {}

  Var operator[](ParamId id);
  Tape& tape() { return tape_; }
  const ModelConfig& config() const { return params_.config(); }

 private:
  Tape& tape_;
  const ModelParams& params_;
  Gradients* grads_;
  std::array<std::optional<Var>, kNumParams> bound_{};
};

}  // namespace glqa

#endif  // GLQA_MODEL_H_
