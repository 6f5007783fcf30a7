// Copyright 2026 The latentsynth Authors.
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.h"
#include "latentsynth/models/bundle.h"
#include "latentsynth/version.h"

namespace latentsynth::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int CountLines(const fs::path& p) {
  const std::string s = Slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

// One scratch directory per test suite run, holding a small WAV corpus and a
// trained model shared by the tests.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(fs::temp_directory_path() / "latentsynth_cli_test");
    fs::remove_all(*root_);
    const Outcome synth = Invoke({"synth-data", "--pitches", "60", "--duration", "0.4", "--folds",
                                  "4", "--out", Corpus().string()});
    ASSERT_EQ(synth.code, kExitOk) << synth.err;
    const Outcome train = Invoke({"train", "--data", Corpus().string(), "--kind", "pca", "--arch",
                                  "513,4,513", "--out", (*root_ / "model").string()});
    ASSERT_EQ(train.code, kExitOk) << train.err;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root_);
    delete root_;
  }

  static fs::path Corpus() { return *root_ / "corpus"; }
  static fs::path Model() { return *root_ / "model" / "model.bundle"; }
  static fs::path Dir(const std::string& name) { return *root_ / name; }
  static fs::path FirstWav(int skip = 0) {
    std::vector<fs::path> wavs;
    for (const auto& e : fs::directory_iterator(Corpus())) {
      if (e.path().extension() == ".wav") wavs.push_back(e.path());
    }
    std::sort(wavs.begin(), wavs.end());
    return wavs.at(static_cast<std::size_t>(skip));
  }

  static fs::path* root_;
};
fs::path* CliTest::root_ = nullptr;

TEST(CliUsageTest, HelpVersionAndBadInvocations) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  const Outcome help = Invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("synth-data"), std::string::npos);
  const Outcome version = Invoke({"--version"});
  EXPECT_EQ(version.code, kExitOk);
  EXPECT_NE(version.out.find(kVersion), std::string::npos);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"train", "--max_epochs", "many"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"train", "--help"}).code, kExitOk);
}

TEST_F(CliTest, SynthDataWritesCorpusManifestAndRunLog) {
  EXPECT_EQ(CountLines(Corpus() / "manifest.tsv"), 2 + 20);  // two comment lines
  const json log = json::parse(Slurp(Corpus() / "run.json"));
  EXPECT_EQ(log["command"], "synth-data");
  EXPECT_EQ(log["seed"], 0);
  EXPECT_EQ(log["config"]["folds"], "4");
  EXPECT_EQ(log["version"], kVersion);
  EXPECT_EQ(log["config_hash"].get<std::string>().size(), 16u);

  // Same settings in another directory hash the same; a different seed does not.
  const Outcome again = Invoke({"synth-data", "--pitches", "60", "--duration", "0.4", "--folds",
                                "4", "--out", Dir("again").string()});
  ASSERT_EQ(again.code, kExitOk);
  EXPECT_EQ(json::parse(Slurp(Dir("again") / "run.json"))["config_hash"], log["config_hash"]);
  EXPECT_EQ(Slurp(Dir("again") / "manifest.tsv"), Slurp(Corpus() / "manifest.tsv"));
  ASSERT_EQ(Invoke({"synth-data", "--pitches", "60", "--duration", "0.4", "--seed", "9", "--out",
                    Dir("other").string()})
                .code,
            kExitOk);
  EXPECT_NE(json::parse(Slurp(Dir("other") / "run.json"))["config_hash"], log["config_hash"]);

  EXPECT_EQ(Invoke({"synth-data", "--pitches", "10", "--out", Dir("bad").string()}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"synth-data", "--folds", "1", "--out", Dir("bad").string()}).code, kExitUsage);
  EXPECT_FALSE(fs::exists(Dir("bad")));
}

TEST_F(CliTest, PreprocessSummarizesFrames) {
  const Outcome r = Invoke({"preprocess", "--data", Corpus().string(), "--export_frames", "--out",
                            Dir("prep").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("20 sounds"), std::string::npos);
  EXPECT_EQ(CountLines(Dir("prep") / "frames_summary.csv"), 21);
  EXPECT_GT(CountLines(Dir("prep") / "frames.csv"), 20);

  EXPECT_EQ(Invoke({"preprocess", "--out", Dir("prep2").string()}).code, kExitUsage);
  EXPECT_EQ(Invoke({"preprocess", "--data", Corpus().string(), "--synthetic"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"preprocess", "--data", Dir("missing").string()}).code, kExitUsage);
  EXPECT_EQ(Invoke({"preprocess", "--synthetic", "--threshold_db", "5"}).code, kExitUsage);
}

TEST_F(CliTest, PreprocessReportsBrokenFilesAsFailure) {
  const fs::path dir = Dir("broken");
  fs::create_directories(dir);
  fs::copy_file(FirstWav(), dir / FirstWav().filename());
  std::ofstream(dir / "broken.wav") << "not audio";
  const Outcome r = Invoke({"preprocess", "--data", dir.string(), "--out", Dir("broken_out").string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("broken"), std::string::npos);
}

TEST_F(CliTest, TrainWritesBundleAndHistory) {
  const models::ModelBundle pca = models::LoadBundle(Model());
  EXPECT_EQ(pca.model.enc(), 4);
  EXPECT_TRUE(fs::exists(Dir("model") / "history.csv"));

  const Outcome ae = Invoke({"train", "--synthetic", "--pitches", "60", "--duration", "0.3",
                             "--kind", "ae", "--arch", "513,3,513", "--max_epochs", "2", "--patience", "1", "--fold",
                             "1", "--folds", "4", "--out", Dir("ae").string()});
  ASSERT_EQ(ae.code, kExitOk) << ae.err;
  EXPECT_EQ(models::LoadBundle(Dir("ae") / "model.bundle").meta.epochs_run, 2);
  EXPECT_EQ(CountLines(Dir("ae") / "history.csv"), 1 + 2);

  const std::vector<std::string> base = {"train", "--synthetic", "--out", Dir("x").string()};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return Invoke(args).code;
  };
  EXPECT_EQ(with({"--arch", "513,8,128,513"}), kExitUsage);
  EXPECT_EQ(with({"--kind", "gan"}), kExitUsage);
  EXPECT_EQ(with({"--hidden_activation", "relu"}), kExitUsage);
  EXPECT_EQ(with({"--fold", "5", "--folds", "5"}), kExitUsage);
  EXPECT_EQ(with({"--learning_rate", "-1"}), kExitUsage);
  EXPECT_FALSE(fs::exists(Dir("x")));
}

TEST_F(CliTest, ConfigFileSuppliesDefaults) {
  const fs::path cfg = Dir("train.cfg");
  std::ofstream(cfg) << "# quick run\nkind = ae\narch = 513,2,513\nmax_epochs = 3\npatience = 1\n"
                        "duration = 0.3  # seconds\npitches = 60\n";
  const Outcome r = Invoke({"train", "--synthetic", "--config", cfg.string(), "--max_epochs", "2",
                            "--out", Dir("cfg").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json log = json::parse(Slurp(Dir("cfg") / "run.json"));
  EXPECT_EQ(log["config"]["kind"], "ae");
  EXPECT_EQ(log["config"]["max_epochs"], "2");  // the command line wins
  EXPECT_EQ(models::LoadBundle(Dir("cfg") / "model.bundle").model.enc(), 2);

  std::ofstream(cfg) << "unknown_key = 3\n";
  EXPECT_EQ(Invoke({"train", "--synthetic", "--config", cfg.string()}).code, kExitUsage);
  std::ofstream(cfg) << "no equals sign\n";
  EXPECT_EQ(Invoke({"train", "--synthetic", "--config", cfg.string()}).code, kExitUsage);
  EXPECT_EQ(Invoke({"train", "--synthetic", "--config", Dir("none.cfg").string()}).code,
            kExitUsage);
}

TEST_F(CliTest, EvaluateWritesReport) {
  const Outcome r = Invoke({"evaluate", "--data", Corpus().string(), "--grid", "pca",
                            "--grid", "tiny=ae:513,enc,513", "--encs", "2,3", "--folds", "2",
                            "--max_epochs", "2", "--patience", "1", "--out", Dir("eval").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  // Header, 2 models x 2 encs x 2 folds cells, 4 aggregates.
  EXPECT_EQ(CountLines(Dir("eval") / "report.csv"), 1 + 8 + 4);
  EXPECT_NE(r.out.find("tiny enc=3"), std::string::npos);
  EXPECT_NE(r.out.find("vs pca"), std::string::npos);

  EXPECT_EQ(Invoke({"evaluate", "--synthetic", "--encs", "4,x"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"evaluate", "--synthetic", "--grid", "svm"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"evaluate", "--synthetic", "--folds", "1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"evaluate", "--synthetic", "--encs", "600"}).code, kExitUsage);
}

TEST_F(CliTest, CorrelateWritesMatrix) {
  const Outcome r = Invoke({"correlate", "--data", Corpus().string(), "--model", Model().string(),
                            "--out", Dir("corr").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(Dir("corr") / "correlation.csv"), 4);
  EXPECT_TRUE(fs::exists(Dir("corr") / "correlation.pgm"));
  EXPECT_NE(Slurp(Dir("corr") / "correlation_summary.txt").find("sounds 20"), std::string::npos);
  EXPECT_EQ(Invoke({"correlate", "--data", Corpus().string()}).code, kExitUsage);
  EXPECT_EQ(Invoke({"correlate", "--data", Corpus().string(), "--model",
                    Dir("nope.bundle").string()})
                .code,
            kExitUsage);
  std::ofstream(Dir("corrupt.bundle")) << "garbage";
  EXPECT_EQ(Invoke({"correlate", "--data", Corpus().string(), "--model",
                    Dir("corrupt.bundle").string(), "--out", Dir("corr2").string()})
                .code,
            kExitFailure);
}

TEST_F(CliTest, InterpolateWritesHybrids) {
  const Outcome r = Invoke({"interpolate", "--model", Model().string(), "--a", FirstWav(0).string(),
                            "--b", FirstWav(7).string(), "--alphas", "0,0.5,1",
                            "--griffin_lim_iters", "2", "--out", Dir("interp").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* stem : {"hybrid_alpha_0.00", "hybrid_alpha_0.50", "hybrid_alpha_1.00"}) {
    EXPECT_TRUE(fs::exists(Dir("interp") / (std::string(stem) + ".wav"))) << stem;
    EXPECT_TRUE(fs::exists(Dir("interp") / (std::string(stem) + ".pgm"))) << stem;
    EXPECT_TRUE(fs::exists(Dir("interp") / (std::string(stem) + ".csv"))) << stem;
  }
  const json meta = json::parse(Slurp(Dir("interp") / "interpolation.json"));
  EXPECT_EQ(meta["outputs"].size(), 3u);
  EXPECT_EQ(meta["outputs"][0]["carrier"], "b");
  EXPECT_EQ(meta["outputs"][2]["carrier"], "a");

  const std::string m = Model().string(), a = FirstWav(0).string();
  EXPECT_EQ(Invoke({"interpolate", "--model", m, "--a", a}).code, kExitUsage);
  EXPECT_EQ(Invoke({"interpolate", "--model", m, "--a", a, "--b", a, "--alphas", "1.5"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"interpolate", "--model", m, "--a", a, "--b", a, "--griffin_lim_iters", "-1"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"interpolate", "--model", m, "--a", a, "--b", Dir("missing.wav").string(),
                    "--out", Dir("interp2").string()})
                .code,
            kExitFailure);
}

TEST_F(CliTest, ServeValidatesBeforeListening) {
  EXPECT_EQ(Invoke({"serve", "--data", Corpus().string()}).code, kExitUsage);
  EXPECT_EQ(Invoke({"serve", "--data", Corpus().string(), "--model", Model().string(), "--port",
                    "70000"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"serve", "--model", Model().string()}).code, kExitUsage);
}

}  // namespace
}  // namespace latentsynth::cli
