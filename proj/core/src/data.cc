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

#include "sqen/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>

#include "sqen/errors.h"
#include "sqen/rng.h"

namespace sqen {
namespace {

constexpr std::uint64_t kSpiralTrainStream = 0x5350'4952'414c'0001ULL;
constexpr std::uint64_t kSpiralTestStream = 0x5350'4952'414c'0002ULL;
constexpr std::uint64_t kSplitStream = 0x5350'4c49'5400'0001ULL;

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> ParseDouble(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> ParseInteger(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> SplitRow(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(Trim(line.substr(start)));
      break;
    }
    cells.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string DataErrorAt(const std::string& source, std::size_t line,
                        const std::string& message) {
  return source + ":" + std::to_string(line) + ": " + message;
}

Dataset MakeSpiralSplit(std::size_t n, const SpiralOptions& options, Rng rng) {
  const double sigma = options.noise_sigma;
  const double turn = 2.0 * std::numbers::pi * options.rotations;
  const double start = turn * options.min_radius;
  Dataset ds{Matrix(n, 2), std::vector<std::size_t>(n), 2, {}};
  for (std::size_t pair = 0; pair < n / 2; ++pair) {
    const double theta = rng.Uniform(start, turn);
    const double radius = theta / turn;
    for (std::size_t cls = 0; cls < 2; ++cls) {
      const double phase = theta + static_cast<double>(cls) * std::numbers::pi;
      const std::size_t row = 2 * pair + cls;
      const double nx = rng.Gaussian(0.0, sigma);
      const double ny = rng.Gaussian(0.0, sigma);
      ds.features(row, 0) = radius * std::cos(phase) + nx;
      ds.features(row, 1) = radius * std::sin(phase) + ny;
      ds.labels[row] = cls;
    }
  }
  return ds;
}

}  // namespace

void Dataset::Validate() const {
  if (labels.empty()) throw DataError("Dataset: no samples");
  if (features.rows() != labels.size()) {
    throw DataError("Dataset: " + std::to_string(features.rows()) +
                    " feature rows for " + std::to_string(labels.size()) +
                    " labels");
  }
  if (class_count < 2) {
    throw DataError("Dataset: need at least 2 classes, got " +
                    std::to_string(class_count));
  }
  if (!class_names.empty() && class_names.size() != class_count) {
    throw DataError("Dataset: " + std::to_string(class_names.size()) +
                    " class names for " + std::to_string(class_count) +
                    " classes");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      throw DataError("Dataset: label " + std::to_string(labels[i]) +
                      " at row " + std::to_string(i) + " >= class count " +
                      std::to_string(class_count));
    }
  }
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (double v : features.row(i)) {
      if (!std::isfinite(v)) {
        throw DataError("Dataset: non-finite feature at row " +
                        std::to_string(i));
      }
    }
  }
}

Dataset Dataset::Subset(const std::vector<std::size_t>& indices) const {
  if (indices.empty()) throw InvalidArgument("Dataset::Subset: no indices");
  Dataset out{Matrix(indices.size(), dim()), {}, class_count, class_names};
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices.at(k);
    if (i >= size()) {
      throw InvalidArgument("Dataset::Subset: index " + std::to_string(i) +
                            " out of range");
    }
    std::copy(features.row(i).begin(), features.row(i).end(),
              out.features.row(k).begin());
    out.labels.push_back(labels[i]);
  }
  return out;
}

std::vector<double> OneHot(std::size_t label, std::size_t class_count) {
  if (label >= class_count) {
    throw InvalidArgument("OneHot: label " + std::to_string(label) +
                          " out of range for " + std::to_string(class_count) +
                          " classes");
  }
  std::vector<double> v(class_count, 0.0);
  v[label] = 1.0;
  return v;
}

std::pair<Dataset, Dataset> GenerateSpiral(const SpiralOptions& options) {
  for (const auto& [name, n] : {std::pair{"n_train", options.n_train},
                               std::pair{"n_test", options.n_test}}) {
    if (n < 2 || n % 2 != 0) {
      throw InvalidArgument(std::string("GenerateSpiral: ") + name +
                            " must be even and >= 2, got " +
                            std::to_string(n));
    }
  }
  if (!(options.noise_sigma >= 0.0) || !std::isfinite(options.noise_sigma)) {
    throw InvalidArgument("GenerateSpiral: noise_sigma must be >= 0");
  }
  if (!(options.rotations > 0.0) || !std::isfinite(options.rotations)) {
    throw InvalidArgument("GenerateSpiral: rotations must be > 0");
  }
  if (!(options.min_radius >= 0.0 && options.min_radius < 1.0)) {
    throw InvalidArgument("GenerateSpiral: min_radius must be in [0, 1)");
  }
  return {MakeSpiralSplit(options.n_train, options,
                          Rng::Substream(options.seed, kSpiralTrainStream)),
          MakeSpiralSplit(options.n_test, options,
                          Rng::Substream(options.seed, kSpiralTestStream))};
}

Dataset ParseCsv(const std::string& text, const CsvOptions& options,
                 const std::string& source_name) {
  struct Row {
    std::size_t line;
    std::vector<std::string_view> cells;
  };
  std::vector<Row> rows;
  {
    std::size_t line_no = 0;
    std::size_t start = 0;
    const std::string_view all(text);
    while (start <= all.size()) {
      std::size_t end = all.find('\n', start);
      if (end == std::string_view::npos) end = all.size();
      ++line_no;
      const std::string_view line = all.substr(start, end - start);
      if (!Trim(line).empty()) {
        rows.push_back({line_no, SplitRow(line, options.delimiter)});
      }
      start = end + 1;
    }
  }
  if (rows.empty()) throw DataError(source_name + ": empty file");

  const std::size_t arity = rows.front().cells.size();
  if (arity < 2) {
    throw DataError(DataErrorAt(source_name, rows.front().line,
                                "need at least one feature and a label"));
  }
  const long long label_col =
      options.label_column < 0
          ? static_cast<long long>(arity) + options.label_column
          : options.label_column;
  if (label_col < 0 || label_col >= static_cast<long long>(arity)) {
    throw DataError(DataErrorAt(source_name, rows.front().line,
                                "label column " +
                                    std::to_string(options.label_column) +
                                    " out of range for " +
                                    std::to_string(arity) + " columns"));
  }
  const auto label_index = static_cast<std::size_t>(label_col);

  std::size_t first = 0;
  if (options.has_header) {
    first = 1;
  } else if (options.detect_header) {
    const auto& cells = rows.front().cells;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c != label_index && !ParseDouble(cells[c])) {
        first = 1;
        break;
      }
    }
  }
  if (first >= rows.size()) throw DataError(source_name + ": no data rows");

  const std::size_t n = rows.size() - first;
  const std::size_t d = arity - 1;
  Matrix features(n, d);
  std::vector<std::string> raw_labels;
  raw_labels.reserve(n);
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != arity) {
      throw DataError(DataErrorAt(
          source_name, row.line,
          "expected " + std::to_string(arity) + " columns, got " +
              std::to_string(row.cells.size())));
    }
    std::size_t f = 0;
    for (std::size_t c = 0; c < arity; ++c) {
      if (c == label_index) {
        if (row.cells[c].empty()) {
          throw DataError(DataErrorAt(source_name, row.line, "empty label"));
        }
        raw_labels.emplace_back(row.cells[c]);
        continue;
      }
      const auto value = ParseDouble(row.cells[c]);
      if (!value || !std::isfinite(*value)) {
        throw DataError(DataErrorAt(
            source_name, row.line,
            "non-numeric feature '" + std::string(row.cells[c]) +
                "' in column " + std::to_string(c + 1)));
      }
      features(r - first, f++) = *value;
    }
  }

  // Integer labels sort numerically, anything else lexicographically.
  std::vector<std::optional<long long>> as_int;
  as_int.reserve(n);
  bool all_int = true;
  for (const auto& s : raw_labels) {
    as_int.push_back(ParseInteger(s));
    all_int = all_int && as_int.back().has_value();
  }
  Dataset ds{std::move(features), std::vector<std::size_t>(n), 0, {}};
  if (all_int) {
    std::map<long long, std::size_t> index;
    for (const auto& v : as_int) index.emplace(*v, 0);
    std::size_t k = 0;
    for (auto& [value, idx] : index) {
      idx = k++;
      ds.class_names.push_back(std::to_string(value));
    }
    for (std::size_t i = 0; i < n; ++i) ds.labels[i] = index.at(*as_int[i]);
  } else {
    std::map<std::string, std::size_t> index;
    for (const auto& s : raw_labels) index.emplace(s, 0);
    std::size_t k = 0;
    for (auto& [name, idx] : index) {
      idx = k++;
      ds.class_names.push_back(name);
    }
    for (std::size_t i = 0; i < n; ++i) ds.labels[i] = index.at(raw_labels[i]);
  }
  ds.class_count = ds.class_names.size();
  if (ds.class_count < options.min_classes) {
    throw DataError(DataErrorAt(
        source_name, rows[first].line,
        std::to_string(ds.class_count) + " distinct label(s), need at least " +
            std::to_string(options.min_classes)));
  }
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), options, path.string());
}

std::string FormatCsv(const Dataset& dataset,
                      const std::vector<std::string>& column_names) {
  std::string out;
  if (!column_names.empty()) {
    if (column_names.size() != dataset.dim() + 1) {
      throw InvalidArgument("FormatCsv: " +
                            std::to_string(column_names.size()) +
                            " column names for " +
                            std::to_string(dataset.dim() + 1) + " columns");
    }
    for (std::size_t c = 0; c < column_names.size(); ++c) {
      if (c > 0) out += ',';
      out += column_names[c];
    }
  } else {
    for (std::size_t c = 0; c < dataset.dim(); ++c) {
      out += "x" + std::to_string(c) + ",";
    }
    out += "label";
  }
  out += '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double v : dataset.features.row(i)) {
      out += FormatDouble(v);
      out += ',';
    }
    const std::size_t y = dataset.labels[i];
    out += dataset.class_names.empty() ? std::to_string(y)
                                       : dataset.class_names.at(y);
    out += '\n';
  }
  return out;
}

void SaveCsv(const Dataset& dataset, const std::filesystem::path& path,
             const std::vector<std::string>& column_names) {
  const std::string text = FormatCsv(dataset, column_names);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

FeatureScaling FitScaling(const Dataset& train) {
  const std::size_t n = train.size();
  const std::size_t d = train.dim();
  if (n == 0) throw InvalidArgument("FitScaling: empty dataset");
  FeatureScaling s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += train.features(i, j);
  }
  for (double& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = train.features(i, j) - s.mean[j];
      s.stddev[j] += c * c;
    }
  }
  for (double& v : s.stddev) v = std::sqrt(v / static_cast<double>(n));
  return s;
}

void FeatureScaling::Apply(Dataset& dataset) const {
  if (dataset.dim() != mean.size() || mean.size() != stddev.size()) {
    throw InvalidArgument("FeatureScaling: " + std::to_string(mean.size()) +
                          " features vs dataset dimension " +
                          std::to_string(dataset.dim()));
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto row = dataset.features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = stddev[j] < kDegenerateStddev ? 0.0
                                             : (row[j] - mean[j]) / stddev[j];
    }
  }
}

StandardizedPair Standardize(const Dataset& train, const Dataset& test) {
  if (train.dim() != test.dim()) {
    throw InvalidArgument("Standardize: train has " +
                          std::to_string(train.dim()) + " features, test " +
                          std::to_string(test.dim()));
  }
  StandardizedPair out{train, test, FitScaling(train)};
  out.scaling.Apply(out.train);
  out.scaling.Apply(out.test);
  return out;
}

std::pair<Dataset, Dataset> Split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("Split: test_fraction must be in (0, 1), got " +
                          std::to_string(test_fraction));
  }
  const std::size_t n = dataset.size();
  Rng rng = Rng::Substream(seed, kSplitStream);

  std::vector<std::vector<std::size_t>> by_class(dataset.class_count);
  for (std::size_t i = 0; i < n; ++i) {
    by_class.at(dataset.labels[i]).push_back(i);
  }
  const bool stratify = std::all_of(
      by_class.begin(), by_class.end(),
      [](const auto& members) { return members.size() >= 2; });

  std::vector<std::size_t> test_idx;
  std::vector<std::size_t> train_idx;
  const auto take = [&](std::vector<std::size_t>& pool) {
    Shuffle(pool, rng);
    const auto k = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(pool.size())));
    test_idx.insert(test_idx.end(), pool.begin(), pool.begin() + k);
    train_idx.insert(train_idx.end(), pool.begin() + k, pool.end());
  };
  if (stratify) {
    for (auto& members : by_class) take(members);
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    take(all);
  }
  if (test_idx.empty() || train_idx.empty()) {
    throw InvalidArgument("Split: fraction " + std::to_string(test_fraction) +
                          " of " + std::to_string(n) +
                          " samples leaves an empty split");
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {dataset.Subset(train_idx), dataset.Subset(test_idx)};
}

}  // namespace sqen
