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

// adacl: train, evaluate and inspect the anomaly regressor from a config file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adacl/config.hpp"
#include "adacl/csv.hpp"
#include "adacl/error.hpp"
#include "adacl/harness.hpp"
#include "adacl/image.hpp"
#include "adacl/model.hpp"
#include "adacl/runtime.hpp"
#include "adacl/training.hpp"

namespace fs = std::filesystem;
using namespace adacl;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kDiverged = 4 };

// Files are written under temporary names and renamed together once every
// one of them succeeded; anything left uncommitted is removed.
class Staging {
 public:
  explicit Staging(std::string dir) : dir_(std::move(dir)) {}
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
  }

  std::string path_for(const std::string& name) {
    fs::create_directories(dir_);
    const fs::path final_path = fs::path(dir_) / name;
    const fs::path tmp = fs::path(dir_) / ("." + name + ".tmp");
    files_.emplace_back(tmp.string(), final_path.string());
    return tmp.string();
  }

  void text(const std::string& name, const std::string& content) {
    const std::string path = path_for(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out.flush()) throw DataError("cannot write " + path);
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) fs::rename(tmp, final_path);
    files_.clear();
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string data;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--seed", c.seed, "Overrides the config seed");
  if (with_out) cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--data", c.data, "Overrides dataset.path");
}

RunConfig resolve(const Common& c) {
  RunConfig config;
  if (!c.config_path.empty()) {
    config = load_config(c.config_path);
  } else {
    config.train.epochs = default_epochs(config.dataset.name);
  }
  if (c.seed) {
    config.seed = *c.seed;
    config.train.seed = *c.seed;
  }
  if (!c.data.empty()) config.dataset.path = c.data;
  config.validate();
  return config;
}

std::string config_header(const RunConfig& config) {
  return "# config_hash=" + config_hash(config) +
         "\n# config=" + dump_config(config, true) + "\n";
}

std::string history_csv(const RunConfig& config, const TrainHistory& h) {
  std::ostringstream out;
  out << config_header(config);
  write_history_csv(out, h);
  return out.str();
}

int cmd_train(const Common& c) {
  const RunConfig config = resolve(c);
  DataSource data(config.dataset);
  const ProtocolSplit& split =
      data.split(config.dataset.normal_class, config.seed,
                 config.split_options());
  const TrainResult result =
      train(config.train, split, [](const EpochRecord& r, const auto&) {
        std::cerr << "epoch " << r.epoch << " train_loss=" << r.train_loss
                  << " val_auroc=" << r.val_auroc << '\n';
      });
  std::ostringstream checkpoint;
  write_checkpoint(checkpoint, result.params);

  Staging staging(c.out);
  staging.text("checkpoint.bin", checkpoint.str());
  staging.text("history.csv", history_csv(config, result.history));
  staging.text("config.json", dump_config(config) + "\n");
  staging.commit();
  std::cout << "best_epoch=" << result.history.best_epoch
            << " stop_epoch=" << result.history.stop_epoch
            << " stop_reason=" << result.history.stop_reason << '\n';
  return kOk;
}

int cmd_eval(const Common& c, const std::string& checkpoint_path) {
  const RunConfig config = resolve(c);
  const ModelParams<float> params = load_checkpoint(checkpoint_path);
  DataSource data(config.dataset);
  const ProtocolSplit& split =
      data.split(config.dataset.normal_class, config.seed,
                 config.split_options());
  const Evaluation ev = evaluate(params, split, config.train.loss,
                                 config.dataset.frame_aggregation);

  std::ostringstream scores;
  scores << config_header(config) << "id,score,label\n";
  for (std::size_t i = 0; i < ev.scored.scores.size(); ++i) {
    scores << csv::field(ev.ids[i]) << ',' << csv::number(ev.scored.scores[i])
           << ',' << ev.scored.labels[i] << '\n';
  }
  std::ostringstream roc;
  roc << config_header(config);
  write_roc_csv(roc, ev.roc);
  std::ostringstream summary;
  summary << "auroc=" << csv::number(ev.auroc);
  if (ev.eer) summary << " eer=" << csv::number(*ev.eer);
  summary << " n=" << ev.scored.scores.size()
          << " anomalies=" << ev.scored.positives() << '\n';

  Staging staging(c.out);
  staging.text("scores.csv", scores.str());
  staging.text("roc.csv", roc.str());
  staging.text("summary.txt", summary.str());
  staging.commit();
  std::cout << summary.str();
  return kOk;
}

int cmd_embed(const Common& c, const std::string& checkpoint_path) {
  const RunConfig config = resolve(c);
  const ModelParams<float> params = load_checkpoint(checkpoint_path);
  DataSource data(config.dataset);
  const ProtocolSplit& split =
      data.split(config.dataset.normal_class, config.seed,
                 config.split_options());
  if (params.channels() != split.channels())
    throw ConfigError("embed: checkpoint and dataset channels differ");

  std::ostringstream out;
  out << config_header(config) << "id,label";
  for (std::size_t k = 0; k < kEmbeddingSize; ++k) out << ",e" << k;
  out << '\n';
  constexpr std::size_t kChunk = 256;
  for (std::size_t begin = 0; begin < split.test.size(); begin += kChunk) {
    const std::size_t end = std::min(split.test.size(), begin + kChunk);
    std::vector<const Image*> images;
    for (std::size_t i = begin; i < end; ++i)
      images.push_back(&split.test[i].image);
    const Tensor<float> e = embed_batch(params, to_batch<float>(images));
    for (std::size_t i = begin; i < end; ++i) {
      out << csv::field(split.test[i].id) << ',' << split.test[i].label;
      for (std::size_t k = 0; k < kEmbeddingSize; ++k)
        out << ',' << csv::number(e[(i - begin) * kEmbeddingSize + k]);
      out << '\n';
    }
  }
  Staging staging(c.out);
  staging.text("embeddings.csv", out.str());
  staging.commit();
  return kOk;
}

int cmd_preview(const Common& c, std::size_t n, const std::string& image_path) {
  const RunConfig config = resolve(c);
  config.train.augment.validate();
  std::vector<Image> originals;
  if (!image_path.empty()) {
    originals.assign(n, read_image(image_path));
  } else {
    DataSource data(config.dataset);
    const ProtocolSplit& split =
        data.split(config.dataset.normal_class, config.seed,
                   config.split_options());
    for (std::size_t i = 0; i < n; ++i)
      originals.push_back(split.train[i % split.train.size()]);
  }
  Staging staging(c.out);
  std::ostringstream index;
  index << config_header(config) << "index,original,augmented,augmentation\n";
  const RngStream root(config.seed);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng = root.derive("preview", i);
    const Augmented a = create_anomaly(originals[i], config.train.augment, rng);
    const std::string ext = originals[i].channels() == 1 ? ".pgm" : ".ppm";
    char stem[32];
    std::snprintf(stem, sizeof stem, "preview_%03zu", i);
    const std::string name(augment_name(a.kind));
    const std::string original = std::string(stem) + "_original" + ext;
    const std::string augmented = std::string(stem) + "_" + name + ext;
    write_pnm(staging.path_for(original), originals[i]);
    write_pnm(staging.path_for(augmented), a.image);
    index << i << ',' << original << ',' << augmented << ',' << name << '\n';
  }
  staging.text("preview.csv", index.str());
  staging.commit();
  return kOk;
}

int cmd_experiment(const Common& c, const std::string& kind_name) {
  const auto kind = parse_plan_kind(kind_name);
  if (!kind) throw ConfigError("unknown experiment kind '" + kind_name + "'");
  const RunConfig config = resolve(c);
  const ExperimentPlan plan = make_plan(*kind, config, c.out);
  DataSource data(config.dataset);
  ExperimentRunner runner(data);
  runner.set_progress([](const std::string& line) {
    std::cerr << line << '\n';
  });
  const PlanOutput output = run_plan(plan, runner);

  Staging staging(c.out);
  for (const CsvTable& table : output.tables) {
    std::ostringstream out;
    write_table(out, table, plan);
    staging.text(table.name + ".csv", out.str());
  }
  staging.text("manifest.json", manifest_json(plan, output.cells));
  staging.commit();
  std::size_t failed = 0;
  for (const CellResult& cell : output.cells) failed += !cell.ok();
  std::cout << "cells=" << output.cells.size() << " failed=" << failed
            << " out=" << c.out << '\n';
  return kOk;
}

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

int fail(const char* cls, const std::exception& e, int code) {
  std::cerr << "error=" << cls << " message=" << one_line(e.what()) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  tune_allocator();
  CLI::App app{"Anomaly detection with created anomalies and continuous "
               "labels"};
  app.require_subcommand(1);
  app.footer("Config defaults (print-config shows the resolved file):\n" +
             dump_config(RunConfig{}));

  Common common;
  std::string checkpoint;
  std::string kind;
  std::string image;
  std::size_t n = 8;

  CLI::App* train_cmd = app.add_subcommand("train", "Train and save the best checkpoint");
  add_common(train_cmd, common);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Score the test protocol");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

  CLI::App* embed_cmd = app.add_subcommand("embed", "Export hidden-layer embeddings");
  add_common(embed_cmd, common);
  embed_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();

  CLI::App* preview_cmd = app.add_subcommand("preview-aug", "Write augmented samples");
  add_common(preview_cmd, common);
  preview_cmd->add_option("-n", n, "Number of samples")->check(CLI::PositiveNumber);
  preview_cmd->add_option("--image", image, "Use this image instead of the dataset");

  CLI::App* exp_cmd = app.add_subcommand("experiment", "Run an experiment plan");
  exp_cmd->add_option("kind", kind,
                      "class-sweep | loss-ablation | label-ablation | "
                      "augment-ablation | interval-sweep | video")
      ->required();
  add_common(exp_cmd, common);

  CLI::App* print_cmd = app.add_subcommand("print-config", "Print the resolved config");
  add_common(print_cmd, common, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return cmd_train(common);
    if (*eval_cmd) return cmd_eval(common, checkpoint);
    if (*embed_cmd) return cmd_embed(common, checkpoint);
    if (*preview_cmd) return cmd_preview(common, n, image);
    if (*exp_cmd) return cmd_experiment(common, kind);
    if (*print_cmd) {
      std::cout << dump_config(resolve(common)) << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    return fail("config", e, kConfig);
  } catch (const DivergenceError& e) {
    return fail("diverged", e, kDiverged);
  } catch (const DataError& e) {
    return fail("data", e, kData);
  } catch (const ShapeError& e) {
    return fail("data", e, kData);
  } catch (const std::exception& e) {
    return fail("internal", e, kInternal);
  }
  return kInternal;
}
