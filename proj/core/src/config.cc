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

#include "sqen/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "sqen/errors.h"

namespace sqen {
namespace {

std::string Trim(std::string_view s) {
  const auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

double ParseReal(const std::string& key, const std::string& value) {
  std::string_view s(value);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw InvalidArgument("'" + key + "' expects a number, got '" + value +
                          "'");
  }
  return v;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& value) {
  Int v{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() ||
      ptr != value.data() + value.size()) {
    throw InvalidArgument("'" + key + "' expects an integer, got '" + value +
                          "'");
  }
  return v;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw InvalidArgument("'" + key + "' expects true/false, got '" + value +
                        "'");
}

}  // namespace

TrainConfig ExperimentConfig::ToTrainConfig(std::size_t input_dim,
                                            std::size_t class_count) const {
  TrainConfig tc;
  tc.loss = loss;
  tc.learning_rate = learning_rate;
  tc.weight_decay = weight_decay;
  tc.epochs = epochs;
  tc.batch_size = batch_size;
  tc.seed = seed;
  tc.architecture = Architecture{input_dim, hidden, class_count};
  tc.shuffle_each_epoch = shuffle;
  tc.Validate();
  return tc;
}

ExperimentConfig TabularDefaults() {
  ExperimentConfig c;
  c.loss.rescale = RescaleParams{1.0, 5.0};
  return c;
}

ExperimentConfig SpiralDefaults() {
  ExperimentConfig c;
  c.learning_rate = 0.01;
  c.weight_decay = 0.0;
  c.epochs = 1000;
  c.batch_size = BatchSize::Of(8);
  c.hidden = {12, 12, 12};
  c.standardize = false;
  return c;
}

std::vector<std::size_t> ParseWidthList(const std::string& text) {
  std::vector<std::size_t> widths;
  const std::string trimmed = Trim(text);
  if (trimmed.empty()) return widths;
  std::stringstream ss(trimmed);
  for (std::string item; std::getline(ss, item, ',');) {
    item = Trim(item);
    const auto w = ParseInt<std::size_t>("hidden", item);
    if (w == 0) throw InvalidArgument("'hidden' widths must be positive");
    widths.push_back(w);
  }
  return widths;
}

std::string FormatNumber(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "loss") {
    config.loss.kind = ParseLossKind(value);
  } else if (key == "t") {
    config.loss.rescale.t = ParseReal(key, value);
    if (!(config.loss.rescale.t > 0.0)) {
      throw InvalidArgument("'t' must be positive");
    }
  } else if (key == "M") {
    config.loss.rescale.M = ParseReal(key, value);
    if (!(config.loss.rescale.M > 0.0)) {
      throw InvalidArgument("'M' must be positive");
    }
  } else if (key == "lr") {
    config.learning_rate = ParseReal(key, value);
    if (!(config.learning_rate > 0.0)) {
      throw InvalidArgument("'lr' must be positive");
    }
  } else if (key == "weight_decay") {
    config.weight_decay = ParseReal(key, value);
    if (config.weight_decay < 0.0) {
      throw InvalidArgument("'weight_decay' must be >= 0");
    }
  } else if (key == "epochs") {
    config.epochs = ParseInt<int>(key, value);
    if (config.epochs <= 0) throw InvalidArgument("'epochs' must be positive");
  } else if (key == "batch_size") {
    config.batch_size = BatchSize::Parse(value);
  } else if (key == "seed") {
    config.seed = ParseInt<std::uint64_t>(key, value);
  } else if (key == "hidden") {
    config.hidden = ParseWidthList(value);
  } else if (key == "bins_k") {
    config.bins_k = ParseInt<std::size_t>(key, value);
    if (config.bins_k == 0) throw InvalidArgument("'bins_k' must be >= 1");
  } else if (key == "standardize") {
    config.standardize = ParseBool(key, value);
  } else if (key == "shuffle") {
    config.shuffle = ParseBool(key, value);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

void ApplyConfigText(ExperimentConfig& config, const std::string& text,
                     const std::string& source_name) {
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = Trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(source_name + ":" + std::to_string(line_no) +
                            ": expected key = value");
    }
    try {
      SetConfigValue(config, Trim(body.substr(0, eq)),
                     Trim(body.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(source_name + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
}

void ApplyConfigFile(ExperimentConfig& config,
                     const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(config, buffer.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const ExperimentConfig& config) {
  std::string hidden;
  for (std::size_t i = 0; i < config.hidden.size(); ++i) {
    if (i > 0) hidden += ",";
    hidden += std::to_string(config.hidden[i]);
  }
  return {
      {"loss", LossKindName(config.loss.kind)},
      {"t", FormatNumber(config.loss.rescale.t)},
      {"M", FormatNumber(config.loss.rescale.M)},
      {"lr", FormatNumber(config.learning_rate)},
      {"weight_decay", FormatNumber(config.weight_decay)},
      {"epochs", std::to_string(config.epochs)},
      {"batch_size", config.batch_size.ToString()},
      {"seed", std::to_string(config.seed)},
      {"hidden", hidden},
      {"bins_k", std::to_string(config.bins_k)},
      {"standardize", config.standardize ? "true" : "false"},
      {"shuffle", config.shuffle ? "true" : "false"},
  };
}

std::string FormatConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, value] : ConfigEntries(config)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace sqen
