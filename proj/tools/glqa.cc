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
// Command-line driver: train, eval, rank, explain, gen-synthetic, grad-check.

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glqa/checkpoint.h"
#include "glqa/config.h"
#include "glqa/dataset.h"
#include "glqa/diagnostics.h"
#include "glqa/evaluation.h"
#include "glqa/grad_check.h"
#include "glqa/model_grad_check.h"
#include "glqa/pipeline.h"
#include "glqa/synthetic.h"
#include "glqa/text.h"
#include "glqa/training.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAcceptance = 3;

// Thrown for failures that map to the acceptance exit code.
struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw glqa::DataError("cannot write " + path);
  out << contents;
  if (!out) throw glqa::DataError("error writing " + path);
}

void LogConfig(const std::string& command, const std::string& dump) {
  std::cerr << "# " << command << " resolved config\n";
  std::istringstream in(dump);
  for (std::string line; std::getline(in, line);) std::cerr << "#   " << line << "\n";
}

void ReportDiagnostics() {
  auto& d = glqa::Diagnostics::Global();
  for (std::size_t k = 0; k < glqa::kNumDiagKinds; ++k) {
    const auto kind = static_cast<glqa::DiagKind>(k);
    if (const std::size_t n = d.Count(kind)) {
      std::cerr << "note: " << n << " " << glqa::DiagKindName(kind)
                << " event(s)\n";
    }
  }
}

void SetThreads(std::size_t threads) {
  if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
}

// "v=20,e=8,h=8,tf=4,local=8,proj=8"
glqa::ModelConfig ParseDims(const std::string& text) {
  glqa::ModelConfig c = glqa::ToyConfig();
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw glqa::ConfigError("--dims: expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t v = 0;
    const auto [p, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size() || v == 0) {
      throw glqa::ConfigError("--dims: bad value for key '" + key + "'");
    }
    if (key == "v") {
      c.vocab_size = v;
    } else if (key == "e") {
      c.embed_dim = v;
    } else if (key == "h") {
      c.hidden_dim = v;
    } else if (key == "tf") {
      c.tf_dim = v;
    } else if (key == "local") {
      c.local_dim = v;
    } else if (key == "proj") {
      c.proj_dim = v;
    } else {
      throw glqa::ConfigError("--dims: unknown key '" + key + "'");
    }
  }
  if (c.vocab_size <= glqa::kNumReserved) {
    throw glqa::ConfigError("--dims: v must exceed the reserved ids");
  }
  return c;
}

struct TrainArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string data;
  std::string out;
  std::string history;
};

int RunTrain(const TrainArgs& args, std::size_t threads) {
  glqa::RunConfig cfg;
  if (!args.config.empty()) cfg.LoadFile(args.config);
  for (const auto& s : args.sets) cfg.Set(s);
  if (!args.data.empty()) cfg.data = args.data;
  if (!args.out.empty()) cfg.out = args.out;
  if (!args.history.empty()) cfg.history = args.history;
  if (threads > 0) cfg.threads = threads;
  if (cfg.data.empty()) throw glqa::ConfigError("train: no dataset (data=)");
  if (cfg.out.empty()) throw glqa::ConfigError("train: no checkpoint path (out=)");
  if (cfg.history.empty()) cfg.history = cfg.out + ".history.csv";
  cfg.Validate();
  SetThreads(cfg.threads);
  LogConfig("train", cfg.Dump());

  const glqa::DatasetFile file = glqa::DatasetFile::Load(cfg.data);
  file.Validate(cfg.data);
  const glqa::Dataset data = glqa::PrepareTrainingData(file, cfg);
  std::cerr << "vocabulary: " << data.vocab().size() << " ids; questions: "
            << data.questions(glqa::Split::kTrain).size() << " train, "
            << data.questions(glqa::Split::kValid).size() << " valid\n";

  glqa::TrainRun run = glqa::TrainModel(data, cfg, [](const glqa::EpochRecord& r) {
    std::fprintf(stderr,
                 "epoch %3zu  loss %.6f  valid P@1 %.4f  MRR %.4f  (%.1fs)\n",
                 r.epoch, r.train_loss, r.valid_p_at_1, r.valid_mrr, r.seconds);
  });
  run.checkpoint.Save(cfg.out);
  WriteFile(cfg.history, glqa::HistoryCsv(run.result.history));
  std::cerr << "best epoch " << run.result.best_epoch
            << (run.result.stopped_early ? " (stopped early)" : "")
            << "; checkpoint " << cfg.out << "; history " << cfg.history
            << "\n";
  ReportDiagnostics();
  return kExitOk;
}

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string split = "test";
  std::size_t k = 500;
  std::uint64_t seed = 1;
  std::string report;
  bool serial = false;
};

int RunEval(const EvalArgs& args, std::size_t threads) {
  SetThreads(threads);
  std::ostringstream dump;
  dump << "ckpt = " << args.ckpt << "\ndata = " << args.data
       << "\nsplit = " << args.split << "\nk = " << args.k
       << "\nseed = " << args.seed << "\nexecution = "
       << (args.serial ? "serial" : "parallel") << "\n";
  LogConfig("eval", dump.str());
  const glqa::Split split = glqa::ParseSplit(args.split);
  glqa::Checkpoint ck = glqa::Checkpoint::Load(args.ckpt);
  const glqa::DatasetFile file = glqa::DatasetFile::Load(args.data);
  file.Validate(args.data);
  const glqa::Dataset data(file, ck.vocab, ck.params.config().tf_mode);
  const glqa::Metrics m = glqa::Evaluate(
      ck.params, data, split, args.k, args.seed,
      args.serial ? glqa::Execution::kSerial : glqa::Execution::kParallel);
  const std::string report = glqa::FormatReport(
      m, std::string(glqa::HeadName(ck.params.config().head)) + " on " +
             args.split);
  std::cout << report;
  if (!args.report.empty()) WriteFile(args.report, report);
  ReportDiagnostics();
  return kExitOk;
}

struct RankArgs {
  std::string ckpt;
  std::string answers;
  std::string question;
  std::size_t top = 5;
};

int RunRank(const RankArgs& args, std::size_t threads) {
  SetThreads(threads);
  std::ostringstream dump;
  dump << "ckpt = " << args.ckpt << "\nanswers = " << args.answers
       << "\nquestion = " << args.question << "\ntop = " << args.top << "\n";
  LogConfig("rank", dump.str());
  glqa::Checkpoint ck = glqa::Checkpoint::Load(args.ckpt);
  const glqa::DatasetFile file = glqa::DatasetFile::Load(args.answers);
  file.Validate(args.answers);
  if (file.answers.empty()) throw glqa::DataError(args.answers + ": no answers");
  const glqa::Dataset data(file, ck.vocab, ck.params.config().tf_mode);

  const auto tokens = glqa::Tokenize(args.question);
  if (tokens.empty()) throw glqa::DataError("question has no tokens");
  const glqa::TokenSequence ids = glqa::Encode(ck.vocab, tokens);
  const glqa::TfVector tf =
      glqa::MakeTfVector(ck.vocab, ids, ck.params.config().tf_mode);

  glqa::CandidatePool pool;
  for (const auto& a : data.answers()) pool.candidates.push_back(a.id);
  glqa::Ranker ranker(ck.params, data);
  const auto scores = ranker.ScoreCandidates(ids, tf, pool.candidates);
  const glqa::RankedPool ranked = glqa::RankByScores(pool, scores);
  const std::size_t n = std::min(args.top, ranked.ids.size());
  std::cout << "rank\tanswer_id\tscore\ttext\n";
  for (std::size_t i = 0; i < n; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu\t%d\t%.6f\t", i + 1, ranked.ids[i],
                  ranked.scores[i]);
    std::cout << buf << data.answer(ranked.ids[i]).text << "\n";
  }
  ReportDiagnostics();
  return kExitOk;
}

struct ExplainArgs {
  std::string ckpt;
  std::string data;
  int question_id = 0;
  int answer_id = 0;
  std::string html;
  std::string tsv;
};

int RunExplain(const ExplainArgs& args, std::size_t threads) {
  SetThreads(threads);
  std::string tsv = args.tsv;
  if (tsv.empty()) {
    const auto dot = args.html.rfind('.');
    tsv = (dot == std::string::npos ? args.html : args.html.substr(0, dot)) +
          ".tsv";
  }
  std::ostringstream dump;
  dump << "ckpt = " << args.ckpt << "\ndata = " << args.data
       << "\nquestion_id = " << args.question_id
       << "\nanswer_id = " << args.answer_id << "\nhtml = " << args.html
       << "\ntsv = " << tsv << "\n";
  LogConfig("explain", dump.str());
  glqa::Checkpoint ck = glqa::Checkpoint::Load(args.ckpt);
  const glqa::DatasetFile file = glqa::DatasetFile::Load(args.data);
  file.Validate(args.data);
  const glqa::Dataset data(file, ck.vocab, ck.params.config().tf_mode);
  glqa::Ranker ranker(ck.params, data);
  const glqa::Explanation e =
      glqa::Explain(ranker, data, args.question_id, args.answer_id);
  WriteFile(args.html, glqa::RenderHtml(e));
  WriteFile(tsv, glqa::RenderTsv(e));
  std::printf("score=%.6f\ntokens=%zu\nhtml=%s\ntsv=%s\n", e.score,
              e.tokens.size(), args.html.c_str(), tsv.c_str());
  return kExitOk;
}

int RunGenSynthetic(const std::string& spec_text, std::int64_t seed,
                    const std::string& out) {
  glqa::SyntheticSpec spec;
  try {
    spec = glqa::SyntheticSpec::Parse(spec_text);
  } catch (const std::invalid_argument& e) {
    throw glqa::ConfigError(std::string("--spec: ") + e.what());
  }
  if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
  LogConfig("gen-synthetic", spec.ToString() + "\nout = " + out + "\n");
  glqa::SyntheticCorpus corpus;
  try {
    corpus = glqa::GenerateSynthetic(spec);
  } catch (const std::invalid_argument& e) {
    throw glqa::ConfigError(std::string("gen-synthetic: ") + e.what());
  }
  corpus.file.Save(out);
  std::cerr << "wrote " << corpus.file.answers.size() << " answers and "
            << corpus.file.questions.size() << " questions to " << out << "\n";
  return kExitOk;
}

int RunGradCheck(const std::string& dims, std::uint64_t seed, double step,
                 double margin, double init_scale) {
  glqa::ModelGradCheckOptions opts;
  opts.dims = ParseDims(dims);
  opts.seed = seed;
  if (step > 0.0) opts.step = step;
  if (margin > 0.0) opts.margin = margin;
  if (init_scale >= 0.0) opts.init_scale = init_scale;
  std::ostringstream dump;
  dump << "v = " << opts.dims.vocab_size << "\ne = " << opts.dims.embed_dim
       << "\nh = " << opts.dims.hidden_dim << "\ntf = " << opts.dims.tf_dim
       << "\nlocal = " << opts.dims.local_dim
       << "\nproj = " << opts.dims.proj_dim << "\nseed = " << seed
       << "\nmargin = " << opts.margin << "\nstep = " << opts.step
       << "\ninit_scale = " << opts.init_scale << "\n";
  LogConfig("grad-check", dump.str());
  const auto checks = glqa::RunModelGradCheck(opts);
  bool ok = true;
  std::printf("# max_rel_error uses a denominator floor of %g; "
              "rel_err_floor_1e-8 uses %g\n",
              glqa::kModelRelErrorFloor, glqa::kRelErrorFloor);
  std::printf("%-10s %-15s %7s %14s %18s %14s  %s\n", "group", "head",
              "coords", "max_rel_error", "rel_err_floor_1e-8", "max_abs_error",
              "worst");
  for (const auto& c : checks) {
    const bool pass = c.max_rel_error < glqa::kGradCheckTolerance;
    ok &= pass;
    std::printf("%-10s %-15s %7zu %14.3e %18.3e %14.3e  %s%s\n",
                c.group.c_str(), c.head.c_str(), c.coordinates,
                c.max_rel_error, c.max_rel_error_strict, c.max_abs_error,
                c.worst.c_str(), pass ? "" : "  EXCEEDS");
  }
  if (!ok) {
    throw AcceptanceFailure("gradient check exceeded tolerance " +
                            std::to_string(glqa::kGradCheckTolerance));
  }
  return kExitOk;
}

int Run(int argc, char** argv) {
  CLI::App app{"Global-local attention answer selection"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  bool verbose = false;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  app.add_flag("-v,--verbose", verbose,
               "Echo the first degenerate-input diagnostic of each kind");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--config", train.config, "key = value config file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--set", train.sets, "Override, key=value")
      ->allow_extra_args(false);
  train_cmd->add_option("--data", train.data, "Dataset file");
  train_cmd->add_option("--out", train.out, "Checkpoint to write");
  train_cmd->add_option("--history", train.history, "History CSV to write");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "P@1 and MRR over a split");
  eval_cmd->add_option("--ckpt", eval.ckpt)->required();
  eval_cmd->add_option("--data", eval.data)->required();
  eval_cmd->add_option("--split", eval.split)
      ->check(CLI::IsMember({"train", "valid", "test"}));
  eval_cmd->add_option("--k", eval.k, "Pool size when a question has none");
  eval_cmd->add_option("--seed", eval.seed, "Pool sampling seed");
  eval_cmd->add_option("--report", eval.report, "Also write the report here");
  eval_cmd->add_flag("--serial", eval.serial, "Rank pools on one thread");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank an answer store");
  rank_cmd->add_option("--ckpt", rank.ckpt)->required();
  rank_cmd->add_option("--answers", rank.answers, "Dataset file")->required();
  rank_cmd->add_option("--question", rank.question)->required();
  rank_cmd->add_option("--top", rank.top);

  ExplainArgs explain;
  auto* explain_cmd =
      app.add_subcommand("explain", "Render attention weights of one pair");
  explain_cmd->add_option("--ckpt", explain.ckpt)->required();
  explain_cmd->add_option("--data", explain.data)->required();
  explain_cmd->add_option("--question-id", explain.question_id)->required();
  explain_cmd->add_option("--answer-id", explain.answer_id)->required();
  explain_cmd->add_option("--html", explain.html)->required();
  explain_cmd->add_option("--tsv", explain.tsv, "Defaults to the HTML path with .tsv");

  std::string spec_text;
  std::int64_t gen_seed = -1;
  std::string gen_out;
  auto* gen_cmd =
      app.add_subcommand("gen-synthetic", "Write a synthetic keyword corpus");
  gen_cmd->add_option("--spec", spec_text,
                      "e.g. vocab=200,train=500,test=100,answer_len=40,k=10");
  gen_cmd->add_option("--seed", gen_seed, "Overrides the spec seed");
  gen_cmd->add_option("--out", gen_out)->required();

  std::string dims;
  std::uint64_t gc_seed = 1;
  auto* gc_cmd = app.add_subcommand(
      "grad-check", "Finite-difference check of every parameter group");
  gc_cmd->add_option("--dims", dims, "e.g. v=20,e=8,h=8,tf=4,local=8,proj=8");
  gc_cmd->add_option("--seed", gc_seed);
  double gc_step = 0.0;
  double gc_margin = 0.0;
  gc_cmd->add_option("--step", gc_step, "Finite-difference step");
  gc_cmd->add_option("--margin", gc_margin, "Hinge margin of the checked loss");
  double gc_init_scale = -1.0;
  gc_cmd->add_option("--init-scale", gc_init_scale,
                     "Redraw parameters from U(-s, s); 0 keeps the training init");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  glqa::Diagnostics::Global().set_verbose(verbose);

  if (*train_cmd) return RunTrain(train, threads);
  if (*eval_cmd) return RunEval(eval, threads);
  if (*rank_cmd) return RunRank(rank, threads);
  if (*explain_cmd) return RunExplain(explain, threads);
  if (*gen_cmd) return RunGenSynthetic(spec_text, gen_seed, gen_out);
  if (*gc_cmd) return RunGradCheck(dims, gc_seed, gc_step, gc_margin, gc_init_scale);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const glqa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const glqa::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const glqa::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kExitData;
  } catch (const glqa::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAcceptance;
  } catch (const AcceptanceFailure& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitAcceptance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
