// Copyright 2026 The sqen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqen/checkpoint.h"
#include "sqen/config.h"
#include "sqen/data.h"
#include "sqen/diagnostics.h"
#include "sqen/errors.h"
#include "sqen/report_json.h"
#include "sqen/trainer.h"

namespace sqen::cli {
namespace {

namespace fs = std::filesystem;

// Files produced by one command. Written to temporaries first and renamed
// only once every output is ready, so a failing command leaves nothing.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void Add(const std::string& name, std::string content) {
    if (name.find('/') != std::string::npos || name.empty()) {
      throw InvalidArgument("output name '" + name + "' must be a plain file");
    }
    files_.emplace_back(name, std::move(content));
  }

  void Commit(std::ostream& out) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      throw DataError("cannot create output directory '" + dir_.string() +
                      "': " + ec.message());
    }
    for (const auto& [name, content] : files_) {
      WriteTextFile(dir_ / (name + ".partial"), content);
    }
    for (const auto& [name, content] : files_) {
      fs::rename(dir_ / (name + ".partial"), dir_ / name);
      out << "wrote " << (dir_ / name).string() << "\n";
    }
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct DataFlags {
  std::string data;
  std::string train;
  std::string test;
  double test_fraction = 0.2;
  int label_col = -1;
  bool header = false;
};

struct ConfigFlags {
  std::string preset = "tabular";
  std::string config;
  std::optional<std::string> loss;
  std::optional<double> t;
  std::optional<double> M;
  std::optional<double> lr;
  std::optional<double> wd;
  std::optional<int> epochs;
  std::optional<std::string> batch;
  std::optional<std::string> hidden;
  std::optional<std::size_t> bins;
  std::optional<std::uint64_t> seed;
  bool no_standardize = false;
  bool no_shuffle = false;
};

void AddDataFlags(CLI::App* app, DataFlags& f) {
  app->add_option("--data", f.data,
                  "Single CSV; split into train/test by --test-fraction");
  app->add_option("--train", f.train, "Training CSV");
  app->add_option("--test", f.test, "Test CSV");
  app->add_option("--test-fraction", f.test_fraction,
                  "Held-out fraction when --data is used")
      ->capture_default_str();
  app->add_option("--label-col", f.label_col,
                  "0-based label column; negative counts from the end")
      ->capture_default_str();
  app->add_flag("--header", f.header,
                "First row is a header (default: detect)");
}

void AddConfigFlags(CLI::App* app, ConfigFlags& f) {
  app->add_option("--preset", f.preset, "Default protocol: tabular | spiral")
      ->check(CLI::IsMember({"tabular", "spiral"}))
      ->capture_default_str();
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--loss", f.loss, "squentropy | cross-entropy | square");
  app->add_option("--t", f.t, "Rescaled square loss weight t");
  app->add_option("--M", f.M, "Rescaled square loss target M");
  app->add_option("--lr", f.lr, "SGD learning rate");
  app->add_option("--wd", f.wd, "Weight decay");
  app->add_option("--epochs", f.epochs, "Training epochs");
  app->add_option("--batch", f.batch, "Batch size: auto | full | <n>");
  app->add_option("--hidden", f.hidden, "Hidden widths, e.g. 64,128,64");
  app->add_option("--bins", f.bins, "ECE bin count K");
  app->add_flag("--no-standardize", f.no_standardize,
                "Skip z-scoring of features");
  app->add_flag("--no-shuffle", f.no_shuffle, "Keep sample order each epoch");
}

ExperimentConfig ResolveConfig(const ConfigFlags& f) {
  ExperimentConfig c = f.preset == "spiral" ? SpiralDefaults()
                                            : TabularDefaults();
  if (!f.config.empty()) ApplyConfigFile(c, f.config);
  const auto set = [&c](const std::string& key, const std::string& value) {
    SetConfigValue(c, key, value);
  };
  if (f.loss) set("loss", *f.loss);
  if (f.t) set("t", FormatNumber(*f.t));
  if (f.M) set("M", FormatNumber(*f.M));
  if (f.lr) set("lr", FormatNumber(*f.lr));
  if (f.wd) set("weight_decay", FormatNumber(*f.wd));
  if (f.epochs) set("epochs", std::to_string(*f.epochs));
  if (f.batch) set("batch_size", *f.batch);
  if (f.hidden) set("hidden", *f.hidden);
  if (f.bins) set("bins_k", std::to_string(*f.bins));
  if (f.seed) set("seed", std::to_string(*f.seed));
  if (f.no_standardize) c.standardize = false;
  if (f.no_shuffle) c.shuffle = false;
  return c;
}

CsvOptions MakeCsvOptions(const DataFlags& f) {
  CsvOptions o;
  o.has_header = f.header;
  o.detect_header = !f.header;
  o.label_column = f.label_col;
  return o;
}

// Re-indexes `data` labels onto `names` (the training classes) by label
// text.
void AlignClasses(const std::vector<std::string>& names, Dataset& data) {
  if (data.class_names == names) return;
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < names.size(); ++k) index.emplace(names[k], k);
  for (auto& y : data.labels) {
    const auto it = index.find(data.class_names.at(y));
    if (it == index.end()) {
      throw DataError("label '" + data.class_names.at(y) +
                      "' does not occur in the training data");
    }
    y = it->second;
  }
  data.class_names = names;
  data.class_count = names.size();
}

struct Splits {
  Dataset train;
  Dataset test;
};

Splits LoadSplits(const DataFlags& f, std::uint64_t seed) {
  const CsvOptions opts = MakeCsvOptions(f);
  if (!f.data.empty()) {
    if (!f.train.empty() || !f.test.empty()) {
      throw InvalidArgument("use either --data or --train/--test, not both");
    }
    auto [train, test] = Split(LoadCsv(f.data, opts), f.test_fraction, seed);
    return {std::move(train), std::move(test)};
  }
  if (f.train.empty() || f.test.empty()) {
    throw InvalidArgument("need --data, or both --train and --test");
  }
  Dataset train = LoadCsv(f.train, opts);
  Dataset test = LoadCsv(f.test, opts);
  if (train.dim() != test.dim()) {
    throw DataError("train has " + std::to_string(train.dim()) +
                    " features, test has " + std::to_string(test.dim()));
  }
  AlignClasses(train.class_names, test);
  return {std::move(train), std::move(test)};
}

// Applies the configured preprocessing; returns the scaling if used.
std::optional<FeatureScaling> Preprocess(const ExperimentConfig& config,
                                         Splits& splits) {
  if (!config.standardize) return std::nullopt;
  auto standardized = Standardize(splits.train, splits.test);
  splits.train = std::move(standardized.train);
  splits.test = std::move(standardized.test);
  return standardized.scaling;
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    ExperimentConfig probe;
    SetConfigValue(probe, "seed", item);
    seeds.push_back(probe.seed);
  }
  if (seeds.empty()) throw InvalidArgument("--seeds is empty");
  return seeds;
}

RunReport MakeRunReport(const ExperimentConfig& config,
                        const TrainHistory& history, const EvalResult& eval) {
  RunReport report;
  report.config = config;
  report.history = history;
  report.test_accuracy = eval.accuracy;
  report.calibration = eval.calibration;
  return report;
}

// --- spiral -----------------------------------------------------------------

struct SpiralFlags {
  SpiralOptions options;
  std::string out = "sqen_out";
};

void RunSpiral(const SpiralFlags& f, std::ostream& out) {
  const auto [train, test] = GenerateSpiral(f.options);
  OutputSet outputs(f.out);
  const std::vector<std::string> columns = {"x", "y", "label"};
  outputs.Add("spiral_train.csv", FormatCsv(train, columns));
  outputs.Add("spiral_test.csv", FormatCsv(test, columns));
  outputs.Commit(out);
}

// --- train ------------------------------------------------------------------

struct TrainFlags {
  DataFlags data;
  ConfigFlags config;
  std::string out = "sqen_out";
  bool record_runtime = false;
};

void RunTrain(const TrainFlags& f, std::ostream& out) {
  const ExperimentConfig config = ResolveConfig(f.config);
  Splits splits = LoadSplits(f.data, config.seed);
  const auto scaling = Preprocess(config, splits);

  const auto start = std::chrono::steady_clock::now();
  const TrainConfig train_config =
      config.ToTrainConfig(splits.train.dim(), splits.train.class_count);
  TrainResult trained = Train(splits.train, train_config);
  const EvalResult eval = Evaluate(trained.params, splits.test, config.bins_k);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  RunReport report = MakeRunReport(config, trained.history, eval);
  if (f.record_runtime) report.runtime_seconds = elapsed.count();

  OutputSet outputs(f.out);
  outputs.Add("model.ckpt",
              SerializeCheckpoint(Checkpoint{std::move(trained.params),
                                             scaling,
                                             splits.train.class_names}));
  outputs.Add("report.json", RunReportToJson(report));
  outputs.Commit(out);
  out << LossKindName(config.loss.kind) << ": train accuracy "
      << report.history.back().train_accuracy << ", test accuracy "
      << report.test_accuracy << ", ECE " << report.calibration.ece << "\n";
}

// --- eval -------------------------------------------------------------------

struct EvalFlags {
  std::string checkpoint;
  DataFlags data;
  std::size_t bins = kDefaultBinCount;
  std::string out = "sqen_out";
};

Dataset LoadForModel(const DataFlags& f, const Checkpoint& ck) {
  const std::string& path = !f.data.empty() ? f.data : f.test;
  if (path.empty()) throw InvalidArgument("need --data (or --test)");
  CsvOptions opts = MakeCsvOptions(f);
  opts.min_classes = 1;
  Dataset data = LoadCsv(path, opts);
  const auto& arch = ck.params.architecture;
  if (data.dim() != arch.input_dim) {
    throw DataError("'" + path + "' has " + std::to_string(data.dim()) +
                    " features, model expects " +
                    std::to_string(arch.input_dim));
  }
  if (data.class_count > arch.class_count) {
    throw DataError("'" + path + "' has " +
                    std::to_string(data.class_count) +
                    " classes, model has " + std::to_string(arch.class_count));
  }
  if (!ck.class_names.empty()) {
    AlignClasses(ck.class_names, data);
  } else {
    data.class_count = arch.class_count;
    data.class_names.clear();
  }
  if (ck.scaling) ck.scaling->Apply(data);
  return data;
}

void RunEval(const EvalFlags& f, std::ostream& out) {
  const Checkpoint ck = LoadCheckpoint(f.checkpoint);
  const Dataset data = LoadForModel(f.data, ck);
  const EvalResult eval = Evaluate(ck.params, data, f.bins);
  // Same keys as the tail of a run report.
  nlohmann::ordered_json json;
  json["test_accuracy"] = eval.accuracy;
  json["calibration_report"] = nlohmann::ordered_json::parse(
      CalibrationReportToJson(eval.calibration));
  OutputSet outputs(f.out);
  outputs.Add("eval.json", json.dump(2) + "\n");
  outputs.Commit(out);
  out << "test accuracy " << eval.accuracy << ", ECE " << eval.calibration.ece
      << "\n";
}

// --- sweep ------------------------------------------------------------------

struct SweepFlags {
  DataFlags data;
  ConfigFlags config;
  std::string seeds = "1,2,3,4,5";
  std::size_t threads = 0;
  std::string out = "sqen_out";
};

void RunSweep(const SweepFlags& f, std::ostream& out) {
  const ExperimentConfig config = ResolveConfig(f.config);
  const auto seeds = ParseSeedList(f.seeds);
  if (seeds.size() < 2) throw InvalidArgument("--seeds needs at least 2 seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() !=
      seeds.size()) {
    throw InvalidArgument("--seeds contains duplicates");
  }
  // The data split depends only on --seed so that every run sees the same
  // train/test partition; only initialization and shuffling vary.
  Splits splits = LoadSplits(f.data, config.seed);
  Preprocess(config, splits);

  SweepOptions options;
  options.bin_count = config.bins_k;
  options.threads = f.threads;
  const SweepResult result =
      Sweep(splits.train, splits.test,
            config.ToTrainConfig(splits.train.dim(), splits.train.class_count),
            seeds, options);

  OutputSet outputs(f.out);
  for (const auto& run : result.runs) {
    ExperimentConfig run_config = config;
    run_config.seed = run.seed;
    outputs.Add("seed_" + std::to_string(run.seed) + ".json",
                RunReportToJson(MakeRunReport(run_config, run.history,
                                              run.eval)));
  }
  outputs.Add("summary.json", RunSummaryToJson(result.summary, config));
  outputs.Commit(out);
  out << "accuracy " << result.summary.accuracy_mean << " +- "
      << result.summary.accuracy_std << ", ECE " << result.summary.ece_mean
      << " +- " << result.summary.ece_std << " over " << seeds.size()
      << " seeds\n";
}

// --- report -----------------------------------------------------------------

struct ReportFlags {
  std::vector<std::string> reports;
  std::string checkpoint;
  DataFlags data;
  std::size_t resolution = kDefaultRasterResolution;
  std::string title;
  std::string out = "sqen_out";
};

void RunReportCmd(const ReportFlags& f, std::ostream& out) {
  if (f.reports.empty() && f.checkpoint.empty()) {
    throw InvalidArgument("need --report and/or --checkpoint");
  }
  OutputSet outputs(f.out);
  SvgStyle style;
  style.title = f.title;

  std::vector<std::pair<std::string, RunReport>> loaded;
  std::set<std::string> names;
  for (const auto& path : f.reports) {
    RunReport report = RunReportFromJson(ReadTextFile(path));
    std::string name = LossKindName(report.config.loss.kind);
    if (names.count(name) > 0) name = fs::path(path).stem().string();
    if (!names.insert(name).second) {
      throw InvalidArgument("duplicate report name '" + name + "'");
    }
    loaded.emplace_back(name, std::move(report));
  }
  const bool prefixed = loaded.size() > 1;
  std::vector<std::pair<std::string, TrainHistory>> histories;
  for (const auto& [name, report] : loaded) {
    const std::string prefix = prefixed ? name + "_" : "";
    outputs.Add(prefix + "reliability.svg",
                ReliabilitySvg(report.calibration, style));
    outputs.Add(prefix + "histogram.svg",
                HistogramSvg(report.calibration, style));
    if (!report.history.empty()) histories.emplace_back(name, report.history);
  }
  if (!histories.empty()) {
    const auto rows = WeightNormSeries(histories);
    outputs.Add("weight_norm.svg", WeightNormSvg(rows, style));
    outputs.Add("weight_norm.csv", SeriesToCsv(rows));
  }

  if (!f.checkpoint.empty()) {
    const Checkpoint ck = LoadCheckpoint(f.checkpoint);
    std::optional<Dataset> points;
    if (!f.data.data.empty() || !f.data.test.empty()) {
      points = LoadForModel(f.data, ck);
    }
    const RasterBounds bounds =
        points ? BoundsFromData(*points) : RasterBounds{};
    const BoundaryRaster raster =
        ComputeBoundaryRaster(ck.params, bounds, f.resolution);
    outputs.Add("boundary.svg",
                RasterSvg(raster, style, points ? &*points : nullptr));
    outputs.Add("boundary.csv", RasterToCsv(raster));
  }
  outputs.Commit(out);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"squentropy / cross-entropy / square-loss training and "
               "calibration lab",
               "sqen"};
  app.require_subcommand(1);

  SpiralFlags spiral;
  auto* spiral_cmd =
      app.add_subcommand("spiral", "Generate two-class spiral train/test CSVs");
  spiral_cmd->add_option("--n-train", spiral.options.n_train)
      ->capture_default_str();
  spiral_cmd->add_option("--n-test", spiral.options.n_test)
      ->capture_default_str();
  spiral_cmd->add_option("--noise", spiral.options.noise_sigma)
      ->capture_default_str();
  spiral_cmd->add_option("--rotations", spiral.options.rotations)
      ->capture_default_str();
  spiral_cmd->add_option("--min-radius", spiral.options.min_radius)
      ->capture_default_str();
  spiral_cmd->add_option("--seed", spiral.options.seed)->capture_default_str();
  spiral_cmd->add_option("--out", spiral.out)->capture_default_str();

  TrainFlags train;
  auto* train_cmd =
      app.add_subcommand("train", "Train one model; write checkpoint + report");
  AddDataFlags(train_cmd, train.data);
  AddConfigFlags(train_cmd, train.config);
  train_cmd->add_option("--seed", train.config.seed, "Run seed");
  train_cmd->add_option("--out", train.out)->capture_default_str();
  train_cmd->add_flag("--record-runtime", train.record_runtime,
                      "Store wall-clock runtime in the report");

  EvalFlags eval;
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate a checkpoint: accuracy and ECE");
  eval_cmd->add_option("--checkpoint", eval.checkpoint)->required();
  AddDataFlags(eval_cmd, eval.data);
  eval_cmd->add_option("--bins", eval.bins)->capture_default_str();
  eval_cmd->add_option("--out", eval.out)->capture_default_str();

  SweepFlags sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Train/evaluate over several seeds");
  AddDataFlags(sweep_cmd, sweep.data);
  AddConfigFlags(sweep_cmd, sweep.config);
  sweep_cmd->add_option("--seed", sweep.config.seed,
                        "Seed for the data split");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Comma-separated run seeds")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads,
                        "Worker threads (0 = hardware)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out)->capture_default_str();

  ReportFlags report;
  auto* report_cmd = app.add_subcommand(
      "report", "Render SVG figures from reports and checkpoints");
  report_cmd->add_option("--report", report.reports, "Run report JSON")
      ->expected(1, -1);
  report_cmd->add_option("--checkpoint", report.checkpoint,
                         "2-class, 2-D checkpoint for the boundary raster");
  AddDataFlags(report_cmd, report.data);
  report_cmd->add_option("--resolution", report.resolution)
      ->capture_default_str();
  report_cmd->add_option("--title", report.title);
  report_cmd->add_option("--out", report.out)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*spiral_cmd) {
      RunSpiral(spiral, out);
    } else if (*train_cmd) {
      RunTrain(train, out);
    } else if (*eval_cmd) {
      RunEval(eval, out);
    } else if (*sweep_cmd) {
      RunSweep(sweep, out);
    } else if (*report_cmd) {
      RunReportCmd(report, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace sqen::cli
