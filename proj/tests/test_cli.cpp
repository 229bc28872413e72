// Copyright 2026 The ADACL Authors. All Rights Reserved.
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

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adacl/config.hpp"
#include "adacl/model.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

namespace adacl {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result adacl(const std::string& args, const TempDir& dir) {
  const std::string err_path = dir.file(".stderr");
  const std::string cmd =
      std::string(ADACL_CLI_PATH) + " " + args + " 2>" + err_path;
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  fs::remove(err_path);
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.starts_with("#")) lines.push_back(line);
  }
  return lines;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) +
         1;
}

// Class 0: dark images, class 1: bright ones.
Benchmark brightness_benchmark(std::size_t train_per_class,
                               std::size_t test_per_class) {
  RngStream rng(11);
  auto dataset = [&rng](std::size_t per_class, const std::string& name) {
    Dataset d{name, {}};
    for (std::size_t i = 0; i < per_class; ++i) {
      for (int c : {0, 1}) {
        Image img(1, 28, 28);
        for (float& v : img.pixels()) {
          const int base = c == 0 ? 0 : 180;
          v = static_cast<float>(rng.integer(base, base + 60)) / 255.0f;
        }
        d.samples.push_back({img, name + std::to_string(d.samples.size()), c});
      }
    }
    return d;
  };
  return {dataset(train_per_class, "train"), dataset(test_per_class, "test")};
}

std::string write_config(const TempDir& dir, const std::string& name,
                         const std::string& json) {
  const std::string path = dir.file(name);
  std::ofstream(path) << json;
  return path;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_idx_benchmark(data_.path().string(),
                                 brightness_benchmark(40, 10));
    config_ = write_config(work_, "c.json", R"({
      "seed": 2,
      "dataset": {"normal_class": 0, "validation_size": 10},
      "optimizer": {"epochs": 2, "batch_size": 16}})");
    checkpoint_ = work_.file("bright.bin");
    save_checkpoint(checkpoint_, testing::brightness_model(1));
  }

  std::string common() const {
    return "--config " + config_ + " --data " + data_.path().string();
  }

  TempDir data_{"cli_data"};
  TempDir work_{"cli_work"};
  std::string config_;
  std::string checkpoint_;
};

TEST_F(CliTest, PrintConfigShowsResolvedDefaults) {
  const Result r = adacl("print-config", work_);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out),
            nlohmann::json::parse(dump_config(RunConfig{})));
  const Result seeded = adacl("print-config --seed 9 " + common(), work_);
  ASSERT_EQ(seeded.code, 0) << seeded.err;
  EXPECT_EQ(nlohmann::json::parse(seeded.out)["seed"], 9);
}

TEST_F(CliTest, ConfigErrorsExitWithCode2) {
  const std::string bad =
      write_config(work_, "bad.json", R"({"dataset": {"nme": "mnist"}})");
  const Result r = adacl("print-config --config " + bad, work_);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err, "error=config message=dataset.nme: unknown key\n");
  EXPECT_EQ(adacl("experiment nonsense " + common(), work_).code, 2);
  EXPECT_NE(adacl("", work_).code, 0);
}

TEST_F(CliTest, MissingDatasetExitsWithCode3AndWritesNothing) {
  const std::string out = work_.file("missing_out");
  const Result r = adacl("eval --checkpoint " + checkpoint_ + " --config " +
                          config_ + " --data " + work_.file("nope") +
                          " --out " + out,
                      work_);
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(r.err.starts_with("error=data message="));
  EXPECT_TRUE(!fs::exists(out) || fs::is_empty(out));
}

TEST_F(CliTest, EvalOfPerfectlySeparatingCheckpoint) {
  const std::string out = work_.file("eval");
  const Result r =
      adacl("eval --checkpoint " + checkpoint_ + " " + common() + " --out " + out,
            work_);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "auroc=1 n=20 anomalies=10\n");
  EXPECT_EQ(slurp(out + "/summary.txt"), r.out);
  const auto scores = data_lines(slurp(out + "/scores.csv"));
  ASSERT_EQ(scores.size(), 21u);
  EXPECT_EQ(scores[0], "id,score,label");
  const auto roc = data_lines(slurp(out + "/roc.csv"));
  EXPECT_EQ(roc[0], "threshold,fpr,tpr");
  EXPECT_EQ(roc[1], "inf,0,0");
  EXPECT_EQ(roc.back(), roc.back().substr(0, roc.back().find(',')) + ",1,1");
  for (const auto& entry : fs::directory_iterator(out))
    EXPECT_FALSE(entry.path().filename().string().starts_with("."));
}

TEST_F(CliTest, EvalRejectsChannelMismatch) {
  const std::string rgb = work_.file("rgb.bin");
  save_checkpoint(rgb, zero_model<float>(3));
  const Result r = adacl("eval --checkpoint " + rgb + " " + common() + " --out " +
                          work_.file("mismatch"),
                      work_);
  EXPECT_EQ(r.code, 2);
  const Result corrupt = adacl("eval --checkpoint " + config_ + " " + common() +
                                " --out " + work_.file("corrupt"),
                            work_);
  EXPECT_EQ(corrupt.code, 3);
}

TEST_F(CliTest, EmbedWritesOneRowPerTestImage) {
  const std::string a = work_.file("embed_a");
  const std::string b = work_.file("embed_b");
  ASSERT_EQ(adacl("embed --checkpoint " + checkpoint_ + " " + common() +
                      " --out " + a,
                  work_)
                .code,
            0);
  ASSERT_EQ(adacl("embed --checkpoint " + checkpoint_ + " " + common() +
                      " --out " + b,
                  work_)
                .code,
            0);
  const std::string text = slurp(a + "/embeddings.csv");
  EXPECT_EQ(text, slurp(b + "/embeddings.csv"));
  const auto lines = data_lines(text);
  ASSERT_EQ(lines.size(), 21u);
  EXPECT_TRUE(lines[0].starts_with("id,label,e0,e1,"));
  for (const auto& line : lines) {
    ASSERT_EQ(count_fields(line), 2 + kEmbeddingSize);
    if (&line == &lines[0]) continue;
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    std::getline(fields, field, ',');
    while (std::getline(fields, field, ',')) EXPECT_GE(std::stod(field), 0.0);
  }
}

TEST_F(CliTest, PreviewWritesPairsDeterministically) {
  const std::string a = work_.file("preview_a");
  const std::string b = work_.file("preview_b");
  ASSERT_EQ(adacl("preview-aug -n 4 " + common() + " --out " + a, work_).code, 0);
  ASSERT_EQ(adacl("preview-aug -n 4 " + common() + " --out " + b, work_).code, 0);
  const auto index = data_lines(slurp(a + "/preview.csv"));
  ASSERT_EQ(index.size(), 5u);
  EXPECT_EQ(index[0], "index,original,augmented,augmentation");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const std::string name = entry.path().filename().string();
    EXPECT_EQ(slurp(entry.path().string()), slurp(b + "/" + name)) << name;
  }
  EXPECT_EQ(files, 9u);
  EXPECT_TRUE(fs::exists(a + "/preview_000_original.pgm"));
}

TEST_F(CliTest, PreviewOfConstantImageUnderCutPasteIsUnchanged) {
  const std::string image = work_.file("gray.pgm");
  write_pnm(image, Image(1, 32, 32, 0.5f));
  const std::string cfg = write_config(
      work_, "cut.json", R"({"augment": {"kinds": ["cut_paste"]}})");
  const std::string out = work_.file("constant");
  const Result r = adacl("preview-aug -n 2 --image " + image + " --config " + cfg +
                          " --out " + out,
                      work_);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out + "/preview_001_cut_paste.pgm"),
            slurp(out + "/preview_001_original.pgm"));
}

TEST_F(CliTest, TrainIsDeterministic) {
  const std::string a = work_.file("train_a");
  const std::string b = work_.file("train_b");
  const Result ra = adacl("train " + common() + " --out " + a, work_);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(adacl("train " + common() + " --out " + b, work_).code, 0);
  EXPECT_EQ(slurp(a + "/checkpoint.bin"), slurp(b + "/checkpoint.bin"));
  EXPECT_EQ(slurp(a + "/history.csv"), slurp(b + "/history.csv"));
  const auto history = data_lines(slurp(a + "/history.csv"));
  ASSERT_EQ(history.size(), 3u);
  EXPECT_EQ(history[0], "epoch,train_loss,val_auroc,lr_at_epoch_end");
  const RunConfig saved = load_config(a + "/config.json");
  EXPECT_EQ(saved.seed, 2u);
  EXPECT_EQ(saved.train.epochs, 2u);
  EXPECT_TRUE(ra.out.starts_with("best_epoch="));
  EXPECT_NO_THROW(load_checkpoint(a + "/checkpoint.bin"));

  const std::string c = work_.file("train_c");
  ASSERT_EQ(adacl("train --seed 3 " + common() + " --out " + c, work_).code, 0);
  EXPECT_NE(slurp(a + "/checkpoint.bin"), slurp(c + "/checkpoint.bin"));
}

TEST_F(CliTest, ExperimentWritesTablesAndManifest) {
  const std::string cfg = write_config(work_, "exp.json", R"({
      "seed": 2,
      "dataset": {"validation_size": 10},
      "optimizer": {"epochs": 1, "batch_size": 16},
      "experiment": {"classes": [0, 1], "runs": 1}})");
  const std::string out = work_.file("exp");
  const Result r = adacl("experiment class-sweep --config " + cfg + " --data " +
                          data_.path().string() + " --out " + out,
                      work_);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "cells=2 failed=0 out=" + out + "\n");
  const std::string table = slurp(out + "/class_sweep.csv");
  EXPECT_TRUE(table.starts_with("# plan=class-sweep\n# config_hash="));
  EXPECT_EQ(data_lines(table)[0], "row,0,1,mean");
  const auto manifest = nlohmann::json::parse(slurp(out + "/manifest.json"));
  EXPECT_EQ(manifest["cells"].size(), 2u);
  EXPECT_TRUE(fs::exists(out + "/class_sweep_cells.csv"));
}

TEST(CliVideo, PatchDatasetReportsEer) {
  TempDir dir("cli_video");
  const testing::VideoFixture f =
      testing::write_video_fixture(dir.path(), 4, 6, {2, 5});
  const std::string cfg = dir.file("v.json");
  std::ofstream(cfg) << R"({"dataset": {"name": "ucsd", "validation_size": 10,
      "train_frames": ")" << f.train_frames << R"(", "test_frames": ")"
                     << f.test_frames << R"(", "test_masks": ")" << f.test_masks
                     << R"("}})";
  const std::string ckpt = dir.file("b.bin");
  save_checkpoint(ckpt, testing::brightness_model(1));
  const Result r = adacl("eval --checkpoint " + ckpt + " --config " + cfg +
                          " --out " + dir.file("out"),
                      dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "auroc=1 eer=0 n=6 anomalies=2\n");
}

TEST(CliMnist, ShortTrainingRunOnClassOne) {
  const fs::path mnist(ADACL_MNIST_DIR);
  if (!fs::exists(mnist / "train-images-idx3-ubyte"))
    GTEST_SKIP() << "MNIST not found under " << mnist;
  TempDir dir("cli_mnist");
  const std::string cfg = dir.file("m.json");
  std::ofstream(cfg) << R"({"seed": 1, "dataset": {"normal_class": 1,
      "train_limit": 600, "test_limit": 600}, "optimizer": {"epochs": 1}})";
  const std::string out = dir.file("out");
  const std::string common =
      "--config " + cfg + " --data " + mnist.string() + " --out " + out;
  ASSERT_EQ(adacl("train " + common, dir).code, 0);
  const Result r = adacl("eval --checkpoint " + out + "/checkpoint.bin " + common,
                      dir);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(r.out.starts_with("auroc="));
  EXPECT_GT(std::stod(r.out.substr(6)), 0.9) << r.out;
}

}  // namespace
}  // namespace adacl
