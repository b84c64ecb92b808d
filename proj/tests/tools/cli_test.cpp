// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "oodkit/bundle.hpp"
#include "oodkit/cli/artifacts.hpp"
#include "oodkit/cli/commands.hpp"
#include "oodkit/cli/config.hpp"
#include "oodkit/cli/manifest.hpp"
#include "oodkit/dataset.hpp"
#include "oodkit/embeddings.hpp"
#include "oodkit/error.hpp"
#include "oodkit/metrics.hpp"
#include "oodkit/synthetic.hpp"
#include "test_util.hpp"

namespace oodkit::cli {
namespace {

using testing::expect_error;
using testing::read_file;
using testing::TempDir;
using testing::write_file;

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  testing::CapturedLog quiet;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Small synthetic corpus written as dataset.jsonl / embeddings.bin.
void write_synthetic(const TempDir& dir) {
  SyntheticSpec spec;
  spec.dim = 6;
  spec.points_per_cluster = 60;
  spec.n_train = 36;
  spec.n_valid = 12;
  spec.seed = 3;
  const SyntheticData data = make_synthetic(spec);
  save_dataset(data.dataset, dir / "dataset.jsonl");
  save_embeddings(data.embeddings, dir / "embeddings.bin");
}

std::vector<std::string> fast_training() { return {"--epochs", "2", "--batch", "16"}; }

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(Config, EmptyFileGivesDefaults) {
  EXPECT_EQ(parse_config_text("").size(), 0u);
  RunConfig cfg;
  apply_values(cfg, parse_config_text("# nothing\n\n"));
  EXPECT_EQ(cfg, RunConfig{});
}

TEST(Config, SetsValues) {
  RunConfig cfg;
  apply_values(cfg, parse_config_text("gamma = 4.0\nk = 14\nmethod = \"nlr\"\ncl_loss = false\n"));
  EXPECT_EQ(cfg.gamma, 4.0);
  EXPECT_EQ(cfg.k, 14);
  EXPECT_EQ(cfg.method, "nlr");
  EXPECT_FALSE(cfg.cl_loss);
}

TEST(Config, Errors) {
  expect_error<UsageError>([] { parse_config_text("gama = 4.0", "run.cfg"); }, "\"gama\"");
  expect_error<UsageError>([] { parse_config_text("[train]\nk = 2", "run.cfg"); }, "sections");
  RunConfig cfg;
  expect_error<UsageError>([&] { apply_values(cfg, parse_config_text("k = 2.5")); }, "\"k\"");
  expect_error<UsageError>([&] { apply_values(cfg, parse_config_text("encoder = maybe")); },
                           "true or false");
  expect_error<UsageError>([&] { apply_values(cfg, parse_config_text("gamma = 1e")); }, "\"gamma\"");
}

TEST(Config, SnapshotRoundTrip) {
  RunConfig cfg;
  cfg.gamma = 0.1;
  cfg.lr = 3e-4;
  cfg.bg = "corpus:some file.txt";
  cfg.seed = 18446744073709551615ull;
  cfg.deterministic_q = true;
  RunConfig back;
  apply_values(back, parse_config_text(to_config_text(cfg)));
  EXPECT_EQ(back, cfg);
}

TEST(Config, EnvSeedThenFile) {
  TempDir dir;
  ::setenv("OODKIT_SEED", "77", 1);
  EXPECT_EQ(load_config(std::nullopt).seed, 77u);
  write_file(dir / "run.cfg", "seed = 5\n");
  EXPECT_EQ(load_config(dir / "run.cfg").seed, 5u);
  ::setenv("OODKIT_SEED", "x7", 1);
  EXPECT_THROW(load_config(std::nullopt), UsageError);
  ::unsetenv("OODKIT_SEED");
  EXPECT_EQ(load_config(std::nullopt).seed, 0u);
}

TEST(Config, DerivedStageConfigs) {
  RunConfig cfg;
  cfg.optimizer = "sgd";
  EXPECT_EQ(train_config(cfg).optimizer, Optimizer::sgd);
  cfg.optimizer = "rmsprop";
  EXPECT_THROW(train_config(cfg), UsageError);
  EXPECT_EQ(parse_int_list("2, 4,8", "sweep_k"), (std::vector<int>{2, 4, 8}));
  EXPECT_EQ(parse_double_list("0.1,4", "sweep_gamma"), (std::vector<double>{0.1, 4.0}));
  expect_error<UsageError>([] { parse_int_list("2,x", "sweep_k"); }, "sweep_k");
}

TEST(Artifacts, ScoresRoundTrip) {
  TempDir dir;
  std::vector<ScoreRow> rows(2);
  rows[0].id = "a";
  rows[0].ood_score = 0.1 + 0.2;
  rows[0].length = 3;
  rows[0].log_ln = -0.7;
  rows[1].id = "b";
  rows[1].ood_score = -1e-300;
  rows[1].is_ood = true;
  save_scores(rows, dir / "s.jsonl");
  EXPECT_EQ(load_scores(dir / "s.jsonl"), rows);
  write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"ood_score\":1}\n{\"id\":\"b\"}\n");
  expect_error<DataError>([&] { load_scores(dir / "bad.jsonl"); }, ":2");
}

TEST(Dispatch, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  const auto unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("frobnicate"), std::string::npos);
  const auto help = run({"eval", "--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("--scores"), std::string::npos);
  const auto flag = run({"eval", "--bogus-flag", "1"});
  EXPECT_EQ(flag.code, 1);
  EXPECT_NE(flag.err.find("--bogus-flag"), std::string::npos);
}

TEST(Dispatch, MissingInputs) {
  TempDir dir;
  const auto missing_flag = run({"eval", "--out-dir", dir.path().string()});
  EXPECT_EQ(missing_flag.code, 1);
  EXPECT_NE(missing_flag.err.find("--scores"), std::string::npos);
  const auto missing_file =
      run({"eval", "--out-dir", dir.path().string(), "--scores", (dir / "nope.jsonl").string(),
           "--dataset", (dir / "nope2.jsonl").string()});
  EXPECT_EQ(missing_file.code, 2);
}

TEST(Dispatch, StagedDensityRun) {
  TempDir dir;
  write_synthetic(dir);
  const std::string d = dir.path().string();
  const std::vector<std::string> io = {"--out-dir", d, "--dataset", d + "/dataset.jsonl",
                                       "--embeddings", d + "/embeddings.bin"};
  ASSERT_EQ(run(std::vector<std::string>{"train-rep", "--k", "4"} + io + fast_training()).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "model.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "train-rep.manifest.json"));
  ASSERT_EQ(run(std::vector<std::string>{"fit-density", "--model-in", d + "/model.json",
                                         "--model-out", "fitted.json"} + io).code, 0);
  const ModelBundle fitted = load_model(dir / "fitted.json");
  EXPECT_TRUE(fitted.encoder && fitted.gmm && fitted.threshold);
  ASSERT_EQ(run({"score", "--out-dir", d, "--model", d + "/fitted.json", "--embeddings",
                 d + "/embeddings.bin"}).code, 0);
  const auto scored = run({"eval", "--out-dir", d, "--scores", d + "/scores.jsonl", "--dataset",
                           d + "/dataset.jsonl"});
  ASSERT_EQ(scored.code, 0) << scored.err;
  const auto report = EvalReport::from_json(nlohmann::json::parse(read_file(dir / "report.json")));
  EXPECT_GT(report.auroc, 0.5);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.csv"));
}

TEST(Dispatch, PipelineIsDeterministic) {
  TempDir dir;
  write_synthetic(dir);
  const std::string d = dir.path().string();
  const auto args = std::vector<std::string>{"pipeline", "--protocol", "given", "--k", "4",
                                             "--dataset", d + "/dataset.jsonl",
                                             "--embeddings", d + "/embeddings.bin"} +
                    fast_training();
  ASSERT_EQ(run(args + std::vector<std::string>{"--out-dir", d + "/a"}).code, 0);
  ASSERT_EQ(run(args + std::vector<std::string>{"--out-dir", d + "/b"}).code, 0);
  for (const char* f : {"summary.json", "summary.csv", "split-0/report.json", "split-0/scores.jsonl"}) {
    EXPECT_EQ(read_file(dir / (std::string("a/") + f)), read_file(dir / (std::string("b/") + f))) << f;
  }
  auto ma = nlohmann::json::parse(read_file(dir / "a/pipeline.manifest.json"));
  auto mb = nlohmann::json::parse(read_file(dir / "b/pipeline.manifest.json"));
  EXPECT_EQ(ma["outputs"].size(), mb["outputs"].size());
  for (std::size_t i = 0; i < ma["outputs"].size(); ++i) {
    EXPECT_EQ(ma["outputs"][i]["sha256"], mb["outputs"][i]["sha256"]);
  }
}

TEST(Dispatch, ConfigFileAndFlagPrecedence) {
  TempDir dir;
  write_synthetic(dir);
  const std::string d = dir.path().string();
  write_file(dir / "run.cfg", "k = 3\nepochs = 1\nbatch = 16\ngamma = 4.0\n");
  ASSERT_EQ(run({"train-rep", "--config", d + "/run.cfg", "--gamma", "0.5", "--out-dir", d,
                 "--dataset", d + "/dataset.jsonl", "--embeddings", d + "/embeddings.bin"}).code,
            0);
  const auto manifest = nlohmann::json::parse(read_file(dir / "train-rep.manifest.json"));
  EXPECT_EQ(manifest["config"]["k"], 3);
  EXPECT_EQ(manifest["config"]["gamma"], 0.5);
  EXPECT_EQ(load_model(dir / "model.json").encoder->config.k, 3);
  // a manifest replays as a config
  ASSERT_EQ(run({"train-rep", "--config", d + "/train-rep.manifest.json", "--out-dir", d + "/re"})
                .code,
            0);
  EXPECT_EQ(read_file(dir / "re/model.json"), read_file(dir / "model.json"));
}

const char* kTextDataset =
    R"({"id":"a1","text":"play some jazz music","label":"music","split":"train"})"
    "\n"
    R"({"id":"a2","text":"play the radio now","label":"music","split":"train"})"
    "\n"
    R"({"id":"a3","text":"play a song by queen","label":"music","split":"train"})"
    "\n"
    R"({"id":"a4","text":"turn the music up","label":"music","split":"train"})"
    "\n"
    R"({"id":"v1","text":"play jazz","label":"music","split":"valid","is_ood":false})"
    "\n"
    R"({"id":"t1","text":"play some music","label":"music","split":"test","is_ood":false})"
    "\n"
    R"({"id":"t2","text":"play the song","label":"music","split":"test","is_ood":false})"
    "\n"
    R"({"id":"t3","text":"book a flight to rome please","label":"travel","split":"test","is_ood":true})"
    "\n"
    R"({"id":"t4","text":"what is the weather","label":"weather","split":"test","is_ood":true})"
    "\n";

TEST(Dispatch, LikelihoodCommands) {
  TempDir dir;
  write_file(dir / "text.jsonl", kTextDataset);
  const std::string d = dir.path().string();
  for (const char* method : {"ln", "lr-ws"}) {
    const auto r = run({"lm-score", "--method", method, "--dataset", d + "/text.jsonl", "--out-dir",
                        d, "--out", std::string(method) + ".jsonl"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(load_scores(dir / (std::string(method) + ".jsonl")).size(), 5u);
  }
  ASSERT_EQ(run({"lm-score", "--method", "nlr", "--bg", "uniform", "--dataset", d + "/text.jsonl",
                 "--out-dir", d, "--out", "nlr.jsonl"}).code,
            0);
  const auto ln = load_scores(dir / "ln.jsonl");
  const auto nlr = load_scores(dir / "nlr.jsonl");
  for (std::size_t i = 0; i < ln.size(); ++i) {
    EXPECT_NEAR(*nlr[i].log_nlr - *ln[i].log_ln, *nlr[0].log_nlr - *ln[0].log_ln, 1e-12);
  }
  ASSERT_EQ(run({"corr-length", "--scores", d + "/ln.jsonl", "--out-dir", d}).code, 0);
  const auto corr = nlohmann::json::parse(read_file(dir / "corr.json"));
  EXPECT_TRUE(corr.contains("r"));
  EXPECT_TRUE(corr.contains("p_value"));
  ASSERT_EQ(run({"noise-corpus", "--dataset", d + "/text.jsonl", "--out-dir", d, "--seed", "3"}).code,
            0);
  EXPECT_FALSE(read_file(dir / "noisy.txt").empty());
  ASSERT_EQ(run({"lm-score", "--method", "lr", "--dataset", d + "/text.jsonl", "--out-dir", d}).code,
            1);
}

TEST(Dispatch, SplitSweepProject) {
  TempDir dir;
  write_synthetic(dir);
  const std::string d = dir.path().string();
  const auto split = run({"split", "--dataset", d + "/dataset.jsonl", "--protocol", "fixed",
                          "--n-ood", "2", "--n-splits", "2", "--out-dir", d});
  ASSERT_EQ(split.code, 0) << split.err;
  const auto sweep = run(std::vector<std::string>{"sweep", "--k", "2,4", "--gamma", "1",
                                                  "--dataset", d + "/dataset.jsonl",
                                                  "--embeddings", d + "/embeddings.bin",
                                                  "--out-dir", d, "--threads", "2"} +
                         fast_training());
  ASSERT_EQ(sweep.code, 0) << sweep.err;
  const auto sj = nlohmann::json::parse(read_file(dir / "sweep.json"));
  EXPECT_EQ(sj["table"].size(), 2u);
  ASSERT_EQ(run({"project", "--embeddings", d + "/embeddings.bin", "--dataset",
                 d + "/dataset.jsonl", "--out-dir", d}).code,
            0);
  EXPECT_EQ(read_file(dir / "pca.csv").rfind("id,pc1,pc2,is_ood", 0), 0u);
}

TEST(Manifest, DigestsAndDeterminism) {
  TempDir dir;
  write_file(dir / "in.txt", "abc");
  write_file(dir / "out.txt", "");
  RunConfig cfg;
  cfg.seed = 9;
  Manifest m("eval", cfg);
  m.add_input("scores", dir / "in.txt");
  m.add_output("report", dir / "out.txt");
  const auto j = m.to_json();
  EXPECT_EQ(j["inputs"][0]["sha256"], "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(j["outputs"][0]["sha256"], "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["command"], "eval");
  const auto path = m.write(dir.path());
  EXPECT_EQ(path.filename(), "eval.manifest.json");
  EXPECT_EQ(read_file(path), read_file(m.write(dir.path())));
}

}  // namespace
}  // namespace oodkit::cli
