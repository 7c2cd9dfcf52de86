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
#ifndef GLQA_DATASET_H_
#define GLQA_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glqa/text.h"

namespace glqa {

// Malformed or inconsistent input data. what() names file, line and field
// when known.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Split { kTrain, kValid, kTest };

std::string_view SplitName(Split s);
Split ParseSplit(std::string_view name);

struct AnswerRecord {
  int id = 0;
  std::string text;
};

struct QuestionRecord {
  int id = 0;
  std::string text;
  std::vector<int> answers;  // correct answer ids, at least one
  Split split = Split::kTrain;
  std::vector<int> pool;     // optional fixed candidate pool
};

// Line-delimited JSON, one record per line:
//   {"kind":"answer","id":7,"text":"..."}
//   {"kind":"question","id":3,"text":"...","answers":[7],"split":"test",
//    "pool":[7,12,40]}
// "pool" is optional.
struct DatasetFile {
  std::vector<AnswerRecord> answers;
  std::vector<QuestionRecord> questions;

  static DatasetFile Load(const std::filesystem::path& path);
  static DatasetFile Parse(std::string_view contents,
                           const std::string& source = "<memory>");
  void Save(const std::filesystem::path& path) const;
  std::string Serialize() const;

  // Unique ids per kind, referenced answers exist, pools contain their
  // correct answers and no duplicates. Throws DataError.
  void Validate(const std::string& source = "<dataset>") const;
};

// Tokenized, id-encoded view of a DatasetFile against one vocabulary.
class Dataset {
 public:
  struct Answer {
    int id = 0;
    std::string text;
    std::vector<std::string> tokens;
    TokenSequence ids;
    TfVector tf;
  };
  struct Question {
    int id = 0;
    std::string text;
    std::vector<std::string> tokens;
    TokenSequence ids;
    TfVector tf;
    std::vector<int> correct;
    Split split = Split::kTrain;
    std::vector<int> pool;
  };

  Dataset() = default;
  Dataset(const DatasetFile& file, Vocabulary vocab,
          TfMode tf_mode = TfMode::kBinary);

  // Token lists of every answer and train question, for vocabulary building.
  static std::vector<std::vector<std::string>> TrainingCorpus(
      const DatasetFile& file);

  const Vocabulary& vocab() const { return vocab_; }
  const Answer& answer(int id) const;
  bool has_answer(int id) const { return answer_index_.count(id) != 0; }
  const Question& question(int id) const;
  const std::vector<Answer>& answers() const { return answers_; }
  const std::vector<Question>& questions() const { return questions_; }
  std::vector<const Question*> questions(Split split) const;

  // Moves every `stride`-th train question (by position) to the valid split.
  // Used when a file has no validation questions.
  void HoldOutValidation(std::size_t stride);

 private:
  Vocabulary vocab_;
  std::vector<Answer> answers_;
  std::vector<Question> questions_;
  std::map<int, std::size_t> answer_index_;
  std::map<int, std::size_t> question_index_;
};

}  // namespace glqa

#endif  // GLQA_DATASET_H_
