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
#include "glqa/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace glqa {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'G', 'L', 'Q', 'A', 'C', 'K', 'P', 'T'};

template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  template <typename T>
  T Get(const char* what) {
    T v;
    std::memcpy(&v, Take(sizeof(T), what), sizeof(T));
    return v;
  }
  std::string GetString(std::size_t n, const char* what) {
    return std::string(Take(n, what), n);
  }
  const char* Take(std::size_t n, const char* what) {
    if (n > bytes_.size() - pos_) {
      throw CheckpointError(source_ + ": truncated while reading " + what);
    }
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

nlohmann::json ModelJson(const ModelConfig& c) {
  return {{"vocab_size", c.vocab_size}, {"embed_dim", c.embed_dim},
          {"hidden_dim", c.hidden_dim}, {"tf_dim", c.tf_dim},
          {"local_dim", c.local_dim},   {"proj_dim", c.proj_dim},
          {"alpha", c.alpha},           {"beta", c.beta},
          {"max_len", c.max_len},       {"head", HeadName(c.head)},
          {"tf_mode", TfModeName(c.tf_mode)}};
}

ModelConfig ModelFromJson(const nlohmann::json& j) {
  ModelConfig c;
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.tf_dim = j.at("tf_dim").get<std::size_t>();
  c.local_dim = j.at("local_dim").get<std::size_t>();
  c.proj_dim = j.at("proj_dim").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.max_len = j.at("max_len").get<std::size_t>();
  c.head = ParseHead(j.at("head").get<std::string>());
  c.tf_mode = ParseTfMode(j.at("tf_mode").get<std::string>());
  return c;
}

nlohmann::json TrainJson(const TrainConfig& c) {
  return {{"margin", c.margin},       {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},         {"beta2", c.beta2},
          {"epsilon", c.epsilon},     {"epochs", c.epochs},
          {"batch_size", c.batch_size}, {"keep_prob", c.keep_prob},
          {"patience", c.patience},   {"seed", c.seed}};
}

TrainConfig TrainFromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.margin = j.at("margin").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.keep_prob = j.at("keep_prob").get<double>();
  c.patience = j.at("patience").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string Checkpoint::Serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  Put<std::uint32_t>(out, kCheckpointVersion);
  const nlohmann::json header = {{"model", ModelJson(params.config())},
                                 {"train", TrainJson(train)},
                                 {"vocab", vocab.words()}};
  const std::string text = header.dump();
  Put<std::uint64_t>(out, text.size());
  out += text;
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(kNumParams));
  for (const Parameter& p : params.all()) {
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out += p.name;
    Put<std::uint64_t>(out, p.value.rows());
    Put<std::uint64_t>(out, p.value.cols());
    const auto d = p.value.data();
    out.append(reinterpret_cast<const char*>(d.data()),
               d.size() * sizeof(double));
  }
  return out;
}

Checkpoint Checkpoint::Deserialize(const std::string& bytes,
                                   const std::string& source) {
  Reader r(bytes, source);
  if (std::memcmp(r.Take(sizeof(kMagic), "magic"), kMagic, sizeof(kMagic))) {
    throw CheckpointError(source + ": not a checkpoint file (bad magic)");
  }
  const auto version = r.Get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError(source + ": unsupported checkpoint version " +
                          std::to_string(version));
  }
  const auto n = r.Get<std::uint64_t>("header length");
  Checkpoint ck;
  try {
    const nlohmann::json header =
        nlohmann::json::parse(r.GetString(static_cast<std::size_t>(n), "header"));
    const ModelConfig config = ModelFromJson(header.at("model"));
    config.Validate();
    ck.params = ModelParams(config);
    ck.train = TrainFromJson(header.at("train"));
    ck.vocab = Vocabulary::FromWords(
        header.at("vocab").get<std::vector<std::string>>());
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(source + ": bad header: " + e.what());
  }
  if (ck.vocab.size() != ck.params.config().vocab_size) {
    throw CheckpointError(source + ": vocabulary has " +
                          std::to_string(ck.vocab.size()) +
                          " ids but the model expects " +
                          std::to_string(ck.params.config().vocab_size));
  }
  const auto count = r.Get<std::uint32_t>("tensor count");
  if (count != kNumParams) {
    throw CheckpointError(source + ": expected " + std::to_string(kNumParams) +
                          " tensors, found " + std::to_string(count));
  }
  for (Parameter& p : ck.params.all()) {
    const auto len = r.Get<std::uint32_t>("tensor name length");
    const std::string name = r.GetString(len, "tensor name");
    if (name != p.name) {
      throw CheckpointError(source + ": expected tensor '" + p.name +
                            "', found '" + name + "'");
    }
    const auto rows = r.Get<std::uint64_t>("tensor rows");
    const auto cols = r.Get<std::uint64_t>("tensor cols");
    if (rows != p.value.rows() || cols != p.value.cols()) {
      throw CheckpointError(source + ": tensor '" + name + "' has shape " +
                            ShapeString({rows, cols}) + ", expected " +
                            ShapeString(p.value.shape()));
    }
    auto d = p.value.data();
    std::memcpy(d.data(), r.Take(d.size() * sizeof(double), "tensor values"),
                d.size() * sizeof(double));
  }
  if (!r.done()) throw CheckpointError(source + ": trailing bytes");
  return ck;
}

void Checkpoint::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("error writing checkpoint " + path.string());
}

Checkpoint Checkpoint::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Deserialize(ss.str(), path.string());
}

}  // namespace glqa
