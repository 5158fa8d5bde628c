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

// JSON documents written and read by the sqen tool.
//
// Calibration report:
//   {"k": K,
//    "bins": [{"index", "count", "accuracy", "confidence", "gap"}, ...],
//    "ece", "n", "overall_accuracy"}
// Empty bins carry null accuracy, confidence and gap.
//
// Run report:
//   {"config": {...}, "history": [{"epoch", "loss", "train_accuracy",
//    "weight_norm"}, ...], "test_accuracy", "calibration_report",
//    "runtime_seconds"}
//
// Sweep summary:
//   {"config": {...}, "runs": [{"seed", "test_accuracy", "test_ece"}, ...],
//    "accuracy_mean", "accuracy_std", "ece_mean", "ece_std",
//    "std_estimator": "sample"}
//
// All documents are pretty-printed with two-space indentation and keys in a
// fixed order, so identical inputs give identical bytes.

#ifndef SQEN_REPORT_JSON_H_
#define SQEN_REPORT_JSON_H_

#include <filesystem>
#include <optional>
#include <string>

#include "sqen/calibration.h"
#include "sqen/config.h"
#include "sqen/trainer.h"

namespace sqen {

struct RunReport {
  ExperimentConfig config;
  TrainHistory history;
  double test_accuracy = 0.0;
  CalibrationReport calibration;
  // Wall-clock seconds; null in the JSON unless recorded.
  std::optional<double> runtime_seconds;
};

std::string CalibrationReportToJson(const CalibrationReport& report);
std::string RunReportToJson(const RunReport& report);
std::string RunSummaryToJson(const RunSummary& summary,
                             const ExperimentConfig& config);

// Throw DataError on malformed JSON (the message includes the byte offset
// of a syntax error) or on missing/mistyped fields.
CalibrationReport CalibrationReportFromJson(const std::string& text);
RunReport RunReportFromJson(const std::string& text);

// Reads a whole file; throws DataError if unreadable.
std::string ReadTextFile(const std::filesystem::path& path);
// Writes a whole file; throws DataError on failure.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace sqen

#endif  // SQEN_REPORT_JSON_H_
