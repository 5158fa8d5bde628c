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

#include "sqen/report_json.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqen/errors.h"

namespace sqen {
namespace {

using Json = nlohmann::ordered_json;

Json ConfigToJson(const ExperimentConfig& c) {
  Json j;
  j["loss"] = LossKindName(c.loss.kind);
  j["t"] = c.loss.rescale.t;
  j["M"] = c.loss.rescale.M;
  j["lr"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size.ToString();
  j["seed"] = c.seed;
  j["hidden"] = c.hidden;
  j["bins_k"] = c.bins_k;
  j["standardize"] = c.standardize;
  j["shuffle"] = c.shuffle;
  return j;
}

ExperimentConfig ConfigFromJson(const Json& j) {
  ExperimentConfig c;
  c.loss.kind = ParseLossKind(j.at("loss").get<std::string>());
  c.loss.rescale.t = j.at("t").get<double>();
  c.loss.rescale.M = j.at("M").get<double>();
  c.learning_rate = j.at("lr").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = BatchSize::Parse(j.at("batch_size").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.bins_k = j.at("bins_k").get<std::size_t>();
  c.standardize = j.at("standardize").get<bool>();
  c.shuffle = j.at("shuffle").get<bool>();
  return c;
}

Json CalibrationToJson(const CalibrationReport& r) {
  Json j;
  j["k"] = r.bin_count;
  Json bins = Json::array();
  for (const auto& b : r.bins) {
    Json jb;
    jb["index"] = b.index;
    jb["count"] = b.count;
    if (b.count > 0) {
      jb["accuracy"] = b.accuracy;
      jb["confidence"] = b.confidence;
      jb["gap"] = b.gap();
    } else {
      jb["accuracy"] = nullptr;
      jb["confidence"] = nullptr;
      jb["gap"] = nullptr;
    }
    bins.push_back(std::move(jb));
  }
  j["bins"] = std::move(bins);
  j["ece"] = r.ece;
  j["n"] = r.n;
  j["overall_accuracy"] = r.overall_accuracy;
  return j;
}

CalibrationReport CalibrationFromJson(const Json& j) {
  CalibrationReport r;
  r.bin_count = j.at("k").get<std::size_t>();
  for (const auto& jb : j.at("bins")) {
    BinStats b;
    b.index = jb.at("index").get<std::size_t>();
    b.count = jb.at("count").get<std::size_t>();
    if (b.count > 0) {
      b.accuracy = jb.at("accuracy").get<double>();
      b.confidence = jb.at("confidence").get<double>();
    }
    r.bins.push_back(b);
  }
  r.ece = j.at("ece").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.overall_accuracy = j.at("overall_accuracy").get<double>();
  if (r.bins.size() != r.bin_count) {
    throw DataError("calibration report: k=" + std::to_string(r.bin_count) +
                    " but " + std::to_string(r.bins.size()) + " bins");
  }
  return r;
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError("invalid JSON at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
}

template <typename Fn>
auto WithFieldErrors(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string CalibrationReportToJson(const CalibrationReport& report) {
  return CalibrationToJson(report).dump(2) + "\n";
}

std::string RunReportToJson(const RunReport& report) {
  Json j;
  j["config"] = ConfigToJson(report.config);
  Json history = Json::array();
  for (std::size_t e = 0; e < report.history.size(); ++e) {
    const auto& rec = report.history[e];
    Json je;
    je["epoch"] = e + 1;
    je["loss"] = rec.mean_loss;
    je["train_accuracy"] = rec.train_accuracy;
    je["weight_norm"] = rec.last_layer_norm;
    history.push_back(std::move(je));
  }
  j["history"] = std::move(history);
  j["test_accuracy"] = report.test_accuracy;
  j["calibration_report"] = CalibrationToJson(report.calibration);
  if (report.runtime_seconds) {
    j["runtime_seconds"] = *report.runtime_seconds;
  } else {
    j["runtime_seconds"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string RunSummaryToJson(const RunSummary& summary,
                             const ExperimentConfig& config) {
  Json j;
  j["config"] = ConfigToJson(config);
  Json runs = Json::array();
  for (const auto& r : summary.runs) {
    Json jr;
    jr["seed"] = r.seed;
    jr["test_accuracy"] = r.test_accuracy;
    jr["test_ece"] = r.test_ece;
    runs.push_back(std::move(jr));
  }
  j["runs"] = std::move(runs);
  j["accuracy_mean"] = summary.accuracy_mean;
  j["accuracy_std"] = summary.accuracy_std;
  j["ece_mean"] = summary.ece_mean;
  j["ece_std"] = summary.ece_std;
  j["std_estimator"] = "sample";
  return j.dump(2) + "\n";
}

CalibrationReport CalibrationReportFromJson(const std::string& text) {
  const Json j = ParseJson(text);
  return WithFieldErrors("calibration report",
                         [&] { return CalibrationFromJson(j); });
}

RunReport RunReportFromJson(const std::string& text) {
  const Json j = ParseJson(text);
  return WithFieldErrors("run report", [&] {
    RunReport r;
    r.config = ConfigFromJson(j.at("config"));
    for (const auto& je : j.at("history")) {
      r.history.push_back({je.at("loss").get<double>(),
                           je.at("train_accuracy").get<double>(),
                           je.at("weight_norm").get<double>()});
    }
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.calibration = CalibrationFromJson(j.at("calibration_report"));
    if (const auto& rt = j.at("runtime_seconds"); !rt.is_null()) {
      r.runtime_seconds = rt.get<double>();
    }
    return r;
  });
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace sqen
