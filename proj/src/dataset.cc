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
#include "glqa/dataset.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace glqa {
namespace {

using nlohmann::json;

std::string Where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

const json& Field(const json& rec, const char* key, const std::string& where) {
  auto it = rec.find(key);
  if (it == rec.end()) throw DataError(where + "missing field '" + key + "'");
  return *it;
}

int IntField(const json& rec, const char* key, const std::string& where) {
  const json& v = Field(rec, key, where);
  if (!v.is_number_integer()) {
    throw DataError(where + "field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string StringField(const json& rec, const char* key,
                        const std::string& where) {
  const json& v = Field(rec, key, where);
  if (!v.is_string()) {
    throw DataError(where + "field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<int> IdList(const json& v, const char* key,
                        const std::string& where) {
  if (!v.is_array()) {
    throw DataError(where + "field '" + key + "' must be an array of ids");
  }
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) {
      throw DataError(where + "field '" + key + "' must contain integers");
    }
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw std::invalid_argument("unknown split '" + std::string(name) +
                              "' (expected train, valid or test)");
}

DatasetFile DatasetFile::Parse(std::string_view contents,
                               const std::string& source) {
  DatasetFile file;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = Where(source, lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + "invalid JSON record (" + e.what() + ")");
    }
    if (!rec.is_object()) throw DataError(where + "record must be an object");
    const std::string kind = StringField(rec, "kind", where);
    if (kind == "answer") {
      file.answers.push_back(
          {IntField(rec, "id", where), StringField(rec, "text", where)});
    } else if (kind == "question") {
      QuestionRecord q;
      q.id = IntField(rec, "id", where);
      q.text = StringField(rec, "text", where);
      q.answers = IdList(Field(rec, "answers", where), "answers", where);
      try {
        q.split = ParseSplit(StringField(rec, "split", where));
      } catch (const std::invalid_argument& e) {
        throw DataError(where + "field 'split': " + e.what());
      }
      if (auto it = rec.find("pool"); it != rec.end()) {
        q.pool = IdList(*it, "pool", where);
      }
      file.questions.push_back(std::move(q));
    } else {
      throw DataError(where + "field 'kind' must be 'answer' or 'question'");
    }
  }
  file.Validate(source);
  return file;
}

DatasetFile DatasetFile::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), path.string());
}

std::string DatasetFile::Serialize() const {
  std::string out;
  for (const auto& a : answers) {
    json rec = {{"kind", "answer"}, {"id", a.id}, {"text", a.text}};
    out += rec.dump() + "\n";
  }
  for (const auto& q : questions) {
    json rec = {{"kind", "question"},
                {"id", q.id},
                {"text", q.text},
                {"answers", q.answers},
                {"split", std::string(SplitName(q.split))}};
    if (!q.pool.empty()) rec["pool"] = q.pool;
    out += rec.dump() + "\n";
  }
  return out;
}

void DatasetFile::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset " + path.string());
  out << Serialize();
}

void DatasetFile::Validate(const std::string& source) const {
  std::set<int> answer_ids;
  for (const auto& a : answers) {
    if (!answer_ids.insert(a.id).second) {
      throw DataError(source + ": duplicate answer id " + std::to_string(a.id));
    }
  }
  std::set<int> question_ids;
  for (const auto& q : questions) {
    const std::string qs = source + ": question " + std::to_string(q.id);
    if (!question_ids.insert(q.id).second) {
      throw DataError(source + ": duplicate question id " +
                      std::to_string(q.id));
    }
    if (q.answers.empty()) throw DataError(qs + ": field 'answers' is empty");
    for (int a : q.answers) {
      if (!answer_ids.count(a)) {
        throw DataError(qs + ": field 'answers' references unknown answer " +
                        std::to_string(a));
      }
    }
    if (!q.pool.empty()) {
      std::set<int> pool(q.pool.begin(), q.pool.end());
      if (pool.size() != q.pool.size()) {
        throw DataError(qs + ": field 'pool' has duplicate ids");
      }
      for (int a : q.pool) {
        if (!answer_ids.count(a)) {
          throw DataError(qs + ": field 'pool' references unknown answer " +
                          std::to_string(a));
        }
      }
      for (int a : q.answers) {
        if (!pool.count(a)) {
          throw DataError(qs + ": field 'pool' misses correct answer " +
                          std::to_string(a));
        }
      }
    }
  }
}

std::vector<std::vector<std::string>> Dataset::TrainingCorpus(
    const DatasetFile& file) {
  std::vector<std::vector<std::string>> corpus;
  for (const auto& a : file.answers) corpus.push_back(Tokenize(a.text));
  for (const auto& q : file.questions) {
    if (q.split == Split::kTrain) corpus.push_back(Tokenize(q.text));
  }
  return corpus;
}

Dataset::Dataset(const DatasetFile& file, Vocabulary vocab, TfMode tf_mode)
    : vocab_(std::move(vocab)) {
  file.Validate();
  answers_.reserve(file.answers.size());
  for (const auto& a : file.answers) {
    Answer ans;
    ans.id = a.id;
    ans.text = a.text;
    ans.tokens = Tokenize(a.text);
    ans.ids = Encode(vocab_, ans.tokens);
    ans.tf = MakeTfVector(vocab_, ans.ids, tf_mode);
    answer_index_[a.id] = answers_.size();
    answers_.push_back(std::move(ans));
  }
  for (const auto& q : file.questions) {
    Question qq;
    qq.id = q.id;
    qq.text = q.text;
    qq.tokens = Tokenize(q.text);
    qq.ids = Encode(vocab_, qq.tokens);
    qq.tf = MakeTfVector(vocab_, qq.ids, tf_mode);
    qq.correct = q.answers;
    qq.split = q.split;
    qq.pool = q.pool;
    question_index_[q.id] = questions_.size();
    questions_.push_back(std::move(qq));
  }
}

const Dataset::Answer& Dataset::answer(int id) const {
  auto it = answer_index_.find(id);
  if (it == answer_index_.end()) {
    throw DataError("answer id " + std::to_string(id) +
                    " missing from answer store");
  }
  return answers_[it->second];
}

const Dataset::Question& Dataset::question(int id) const {
  auto it = question_index_.find(id);
  if (it == question_index_.end()) {
    throw DataError("question id " + std::to_string(id) + " not found");
  }
  return questions_[it->second];
}

std::vector<const Dataset::Question*> Dataset::questions(Split split) const {
  std::vector<const Question*> out;
  for (const auto& q : questions_)
    if (q.split == split) out.push_back(&q);
  return out;
}

void Dataset::HoldOutValidation(std::size_t stride) {
  if (stride == 0) return;
  std::size_t k = 0;
  for (auto& q : questions_) {
    if (q.split != Split::kTrain) continue;
    if (k++ % stride == stride - 1) q.split = Split::kValid;
  }
}

}  // namespace glqa
