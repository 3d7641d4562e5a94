/* Copyright 2026 The Stackprop Authors. All Rights Reserved.

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

#include "stackprop/cli.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "stackprop/corpus.h"
#include "stackprop/model_io.h"

namespace stackprop {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string> &args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::vector<std::string> kSmall = {
    "--tagger_hidden", "8",  "--parser_hidden",      "16", "--word_dim",
    "4",               "--affix_dim", "3",           "--symbol_dim", "2",
    "--capitalization_dim", "2", "--implicit_dim",   "5",  "--label_dim",
    "3",               "--pipeline_word_dim", "4",   "--parser_epochs", "2",
    "--tagger_epochs", "2",  "--batch_size",         "8",  "--jackknife_folds",
    "2"};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() /
                        ("stackprop_cli_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    ASSERT_EQ(Cli({"--seed", "4", "generate", "--sentences", "30", "--output",
                   Path("train.conllu")})
                  .code,
              kExitOk);
    ASSERT_EQ(Cli({"--seed", "5", "generate", "--sentences", "12", "--output",
                   Path("dev.conllu")})
                  .code,
              kExitOk);
    std::vector<std::string> args = {"--seed", "3", "train", "--train",
                                     Path("train.conllu"), "--dev",
                                     Path("dev.conllu"), "--model",
                                     Path("m.model"), "--mode", "stackprop"};
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    const CliRun r = Cli(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }

  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  static std::string Path(const std::string &name) {
    return (*dir_ / name).string();
  }

  static fs::path *dir_;
};

fs::path *CliTest::dir_ = nullptr;

TEST_F(CliTest, GenerateIsSeeded) {
  const CliRun a = Cli({"--seed", "9", "generate", "--sentences", "5"});
  const CliRun b = Cli({"--seed", "9", "generate", "--sentences", "5"});
  const CliRun c = Cli({"--seed", "10", "generate", "--sentences", "5"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(ParseConllu(a.out).size(), 5u);
}

TEST_F(CliTest, TrainWritesModelAndManifest) {
  EXPECT_TRUE(fs::exists(Path("m.model")));
  const nlohmann::json manifest =
      nlohmann::json::parse(Slurp(Path("m.model.manifest.json")));
  EXPECT_EQ(manifest["config"]["mode"], "stackprop");
  EXPECT_EQ(manifest["config"]["seed"], "3");
  EXPECT_EQ(manifest["model"]["digest"],
            ContentDigest(Slurp(Path("m.model"))));
  EXPECT_EQ(manifest["report"]["epochs"].size(), 2u);
  EXPECT_TRUE(manifest["train"]["digest"].is_string());
}

TEST_F(CliTest, ManifestReplayReproducesTheModel) {
  const CliRun r = Cli({"train", "--manifest", Path("m.model.manifest.json"),
                     "--model", Path("replay.model")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("replay_digest_match=1"), std::string::npos) << r.err;
  EXPECT_EQ(Slurp(Path("replay.model")), Slurp(Path("m.model")));
}

TEST_F(CliTest, ParseOutputIsThreadIndependent) {
  const std::string input = Slurp(Path("dev.conllu"));
  const CliRun one = Cli({"--threads", "1", "parse", "--model", Path("m.model")},
                      input);
  const CliRun four = Cli({"--threads", "4", "parse", "--model", Path("m.model")},
                       input);
  ASSERT_EQ(one.code, kExitOk) << one.err;
  ASSERT_EQ(four.code, kExitOk) << four.err;
  EXPECT_EQ(one.out, four.out);
  const std::vector<Sentence> parsed = ParseConllu(one.out);
  ASSERT_EQ(parsed.size(), 12u);
  EXPECT_NE(one.err.find("sentences_per_sec="), std::string::npos);
  // Gold tags pass through outside joint mode.
  EXPECT_EQ(parsed[0].tokens[0].upos, ParseConllu(input)[0].tokens[0].upos);
}

TEST_F(CliTest, EmptyInputGivesEmptyOutput) {
  const CliRun parse = Cli({"parse", "--model", Path("m.model")}, "");
  EXPECT_EQ(parse.code, kExitOk);
  EXPECT_EQ(parse.out, "");
  const CliRun tag = Cli({"tag", "--model", Path("m.model")}, "");
  EXPECT_EQ(tag.code, kExitOk);
  EXPECT_EQ(tag.out, "");
}

TEST_F(CliTest, EvalScoresParses) {
  const CliRun parse = Cli({"parse", "--model", Path("m.model"), "--input",
                         Path("dev.conllu"), "--output", Path("dev.parsed")});
  ASSERT_EQ(parse.code, kExitOk) << parse.err;
  const CliRun self = Cli({"eval", "--gold", Path("dev.conllu"), "--system",
                        Path("dev.conllu"), "--kv"});
  EXPECT_EQ(self.code, kExitOk);
  EXPECT_NE(self.out.find("uas=1.000000"), std::string::npos) << self.out;
  EXPECT_NE(self.out.find("las=1.000000"), std::string::npos);
  const CliRun r = Cli({"eval", "--gold", Path("dev.conllu"), "--system",
                     Path("dev.parsed"), "--compare", Path("dev.conllu"),
                     "--reference", Path("dev.conllu"), "--kv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("UAS"), std::string::npos);
  EXPECT_NE(r.out.find("p="), std::string::npos);
  EXPECT_NE(r.out.find("las_rest="), std::string::npos);
}

TEST_F(CliTest, TagReplacesTags) {
  const CliRun r = Cli({"tag", "--model", Path("m.model"), "--input",
                     Path("dev.conllu")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::vector<Sentence> tagged = ParseConllu(r.out);
  const std::vector<Sentence> gold = ReadConlluFile(Path("dev.conllu"));
  ASSERT_EQ(tagged.size(), gold.size());
  for (size_t s = 0; s < gold.size(); ++s) {
    ASSERT_EQ(tagged[s].size(), gold[s].size());
    EXPECT_EQ(tagged[s].tokens[0].head, gold[s].tokens[0].head);
  }
}

TEST_F(CliTest, JackknifeNeighborsInspect) {
  std::vector<std::string> args = {"jackknife", "--train",
                                   Path("dev.conllu"), "--model-prefix",
                                   Path("jk")};
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  const CliRun jk = Cli(args);
  ASSERT_EQ(jk.code, kExitOk) << jk.err;
  EXPECT_EQ(ParseConllu(jk.out).size(), 12u);
  EXPECT_TRUE(fs::exists(Path("jk.fold2.model")));

  const CliRun nn = Cli({"neighbors", "--model", Path("m.model"), "--corpus",
                      Path("dev.conllu"), "--sentence", "1", "--token", "2",
                      "--k", "4"});
  ASSERT_EQ(nn.code, kExitOk) << nn.err;
  EXPECT_EQ(std::count(nn.out.begin(), nn.out.end(), '\n'), 5);
  EXPECT_EQ(nn.out.rfind("query\t", 0), 0u);

  const CliRun info = Cli({"inspect-model", "--model", Path("m.model")});
  ASSERT_EQ(info.code, kExitOk);
  EXPECT_NE(info.out.find("mode = stackprop"), std::string::npos);
  EXPECT_NE(info.out.find("parser.input_width = 136"), std::string::npos)
      << info.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"parse"}).code, kExitUsage);  // --model is required
  EXPECT_EQ(Cli({"train", "--train", Path("train.conllu"), "--model",
                 Path("x.model"), "--no_such_key", "1"})
                .code,
            kExitUsage);
  EXPECT_EQ(Cli({"train", "--train", Path("train.conllu"), "--model",
                 Path("x.model"), "--parser_epochs", "-1"})
                .code,
            kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);

  EXPECT_EQ(Cli({"parse", "--model", Path("missing.model")}, "").code,
            kExitModel);
  {
    std::ofstream bad(Path("bad.model"), std::ios::binary);
    bad << "STKPROP garbage";
  }
  EXPECT_EQ(Cli({"parse", "--model", Path("bad.model")}, "").code, kExitModel);

  const CliRun malformed =
      Cli({"parse", "--model", Path("m.model")}, "1\tdog\n\n");
  EXPECT_EQ(malformed.code, kExitData);
  EXPECT_NE(malformed.err.find("line 1"), std::string::npos) << malformed.err;
  EXPECT_EQ(Cli({"eval", "--gold", Path("dev.conllu"), "--system",
                 Path("train.conllu")})
                .code,
            kExitData);
  // A path that names nothing is a bad invocation, not bad data.
  EXPECT_EQ(Cli({"eval", "--gold", Path("nope.conllu"), "--system",
                 Path("train.conllu")})
                .code,
            kExitUsage);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  {
    std::ofstream cfg(Path("c.cfg"));
    cfg << "# small\nmode = window\nparser_epochs = 1\n";
  }
  std::vector<std::string> args = {"--config", Path("c.cfg"), "train",
                                    "--train", Path("dev.conllu"), "--model",
                                    Path("w.model")};
  // Flags win over the file: kSmall asks for two parser epochs.
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  const CliRun r = Cli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json manifest =
      nlohmann::json::parse(Slurp(Path("w.model.manifest.json")));
  EXPECT_EQ(manifest["config"]["mode"], "window");
  EXPECT_EQ(manifest["config"]["parser_epochs"], "2");
}

}  // namespace
}  // namespace stackprop
