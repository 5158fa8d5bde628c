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

#include "sqen/checkpoint.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "sqen/errors.h"

namespace sqen {
namespace {

constexpr std::string_view kMagic = "sqen-checkpoint";

// C99 "%a" spelling: [-]0x1.8p+3. to_chars leaves out the "0x".
void AppendHex(std::string& out, double v) {
  if (std::signbit(v)) out += '-';
  out += "0x";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::abs(v),
                                       std::chars_format::hex);
  out.append(buf, ptr);
}

void AppendValues(std::string& out, std::string_view tag,
                  std::span<const double> values) {
  out += tag;
  for (double v : values) {
    out += ' ';
    AppendHex(out, v);
  }
  out += '\n';
}

// Names may hold any text; '%', whitespace and control bytes become %XX.
std::string EscapeName(const std::string& name) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  if (name.empty()) return "%";
  std::string out;
  for (unsigned char c : name) {
    if (c == '%' || c <= ' ' || c == 0x7f) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : stream_(text) {}

  // Next non-empty line split on spaces. Fails at end of input.
  std::vector<std::string> Next(std::string_view expecting) {
    std::string line;
    while (std::getline(stream_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> tokens;
      std::istringstream ls(line);
      for (std::string tok; ls >> tok;) tokens.push_back(std::move(tok));
      return tokens;
    }
    throw DataError("checkpoint: unexpected end of file, expected " +
                    std::string(expecting));
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw DataError("checkpoint line " + std::to_string(line_no_) + ": " +
                    message);
  }

  std::size_t ParseSize(const std::string& tok) const {
    std::size_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      Fail("expected an unsigned integer, got '" + tok + "'");
    }
    return v;
  }

  double ParseHex(const std::string& tok) const {
    std::string_view s(tok);
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
      negative = true;
      s.remove_prefix(1);
    }
    const bool prefixed = s.starts_with("0x") || s.starts_with("0X");
    if (prefixed) s.remove_prefix(2);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v,
                                           std::chars_format::hex);
    if (!prefixed || ec != std::errc() || ptr != s.data() + s.size() ||
        s.empty() || !std::isfinite(v)) {
      Fail("expected a hex-float, got '" + tok + "'");
    }
    return negative ? -v : v;
  }

  std::string UnescapeName(const std::string& tok) const {
    if (tok == "%") return "";
    std::string out;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] != '%') {
        out += tok[i];
        continue;
      }
      unsigned v = 0;
      const char* first = tok.data() + i + 1;
      const char* last = first + std::min<std::size_t>(2, tok.size() - i - 1);
      const auto [ptr, ec] = std::from_chars(first, last, v, 16);
      if (ec != std::errc() || ptr != first + 2) {
        Fail("bad escape in class name '" + tok + "'");
      }
      out += static_cast<char>(v);
      i += 2;
    }
    return out;
  }

  // Tag followed by exactly `count` hex-floats.
  std::vector<double> Values(std::string_view tag, std::size_t count) {
    const auto tokens = Next(tag);
    if (tokens.empty() || tokens[0] != tag) {
      Fail("expected '" + std::string(tag) + "'");
    }
    if (tokens.size() != count + 1) {
      Fail("'" + std::string(tag) + "' needs " + std::to_string(count) +
           " values, got " + std::to_string(tokens.size() - 1));
    }
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      values.push_back(ParseHex(tokens[i]));
    }
    return values;
  }

 private:
  std::istringstream stream_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& checkpoint) {
  const auto& params = checkpoint.params;
  params.Validate();
  const auto& arch = params.architecture;
  std::string out;
  out += std::string(kMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
  out += "input_dim " + std::to_string(arch.input_dim) + "\n";
  out += "class_count " + std::to_string(arch.class_count) + "\n";
  out += "hidden " + std::to_string(arch.hidden_widths.size());
  for (std::size_t w : arch.hidden_widths) out += " " + std::to_string(w);
  out += "\n";
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    out += "layer " + std::to_string(l) + " " +
           std::to_string(layer.weights.rows()) + " " +
           std::to_string(layer.weights.cols()) + "\n";
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      AppendValues(out, "w", layer.weights.row(r));
    }
    AppendValues(out, "b", layer.bias);
  }
  if (checkpoint.scaling) {
    const auto& s = *checkpoint.scaling;
    if (s.mean.size() != arch.input_dim || s.stddev.size() != arch.input_dim) {
      throw InvalidArgument("SerializeCheckpoint: scaling has " +
                            std::to_string(s.mean.size()) +
                            " features, network expects " +
                            std::to_string(arch.input_dim));
    }
    out += "scaling " + std::to_string(s.mean.size()) + "\n";
    AppendValues(out, "mean", s.mean);
    AppendValues(out, "std", s.stddev);
  }
  if (!checkpoint.class_names.empty()) {
    if (checkpoint.class_names.size() != arch.class_count) {
      throw InvalidArgument("SerializeCheckpoint: " +
                            std::to_string(checkpoint.class_names.size()) +
                            " class names for " +
                            std::to_string(arch.class_count) + " classes");
    }
    out += "classes " + std::to_string(arch.class_count);
    for (const auto& name : checkpoint.class_names) {
      out += " " + EscapeName(name);
    }
    out += "\n";
  }
  out += "end\n";
  return out;
}

Checkpoint ParseCheckpoint(const std::string& text) {
  LineReader reader(text);
  auto tokens = reader.Next("header");
  if (tokens.size() != 2 || tokens[0] != kMagic) {
    reader.Fail("not a sqen checkpoint");
  }
  if (reader.ParseSize(tokens[1]) != kCheckpointVersion) {
    reader.Fail("unsupported checkpoint version " + tokens[1]);
  }

  Checkpoint ck;
  auto& arch = ck.params.architecture;
  tokens = reader.Next("input_dim");
  if (tokens.size() != 2 || tokens[0] != "input_dim") {
    reader.Fail("expected 'input_dim <d>'");
  }
  arch.input_dim = reader.ParseSize(tokens[1]);
  tokens = reader.Next("class_count");
  if (tokens.size() != 2 || tokens[0] != "class_count") {
    reader.Fail("expected 'class_count <C>'");
  }
  arch.class_count = reader.ParseSize(tokens[1]);
  tokens = reader.Next("hidden");
  if (tokens.size() < 2 || tokens[0] != "hidden" ||
      reader.ParseSize(tokens[1]) != tokens.size() - 2) {
    reader.Fail("expected 'hidden <L> <w1> ... <wL>'");
  }
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    arch.hidden_widths.push_back(reader.ParseSize(tokens[i]));
  }
  try {
    arch.Validate();
  } catch (const InvalidArgument& e) {
    reader.Fail(e.what());
  }

  const auto widths = arch.LayerWidths();
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    tokens = reader.Next("layer");
    if (tokens.size() != 4 || tokens[0] != "layer" ||
        reader.ParseSize(tokens[1]) != l ||
        reader.ParseSize(tokens[2]) != widths[l + 1] ||
        reader.ParseSize(tokens[3]) != widths[l]) {
      reader.Fail("expected 'layer " + std::to_string(l) + " " +
                  std::to_string(widths[l + 1]) + " " +
                  std::to_string(widths[l]) + "'");
    }
    DenseLayer layer{Matrix(widths[l + 1], widths[l]), {}};
    for (std::size_t r = 0; r < widths[l + 1]; ++r) {
      const auto row = reader.Values("w", widths[l]);
      std::copy(row.begin(), row.end(), layer.weights.row(r).begin());
    }
    layer.bias = reader.Values("b", widths[l + 1]);
    ck.params.layers.push_back(std::move(layer));
  }

  tokens = reader.Next("end");
  if (tokens.size() == 2 && tokens[0] == "scaling") {
    if (reader.ParseSize(tokens[1]) != arch.input_dim) {
      reader.Fail("scaling width must equal input_dim");
    }
    FeatureScaling s;
    s.mean = reader.Values("mean", arch.input_dim);
    s.stddev = reader.Values("std", arch.input_dim);
    ck.scaling = std::move(s);
    tokens = reader.Next("end");
  }
  if (!tokens.empty() && tokens[0] == "classes") {
    if (tokens.size() < 2 || reader.ParseSize(tokens[1]) != arch.class_count ||
        tokens.size() != arch.class_count + 2) {
      reader.Fail("expected 'classes " + std::to_string(arch.class_count) +
                  "' followed by that many names");
    }
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      ck.class_names.push_back(reader.UnescapeName(tokens[i]));
    }
    tokens = reader.Next("end");
  }
  if (tokens.size() != 1 || tokens[0] != "end") reader.Fail("expected 'end'");
  try {
    ck.params.Validate();
  } catch (const InvalidArgument& e) {
    reader.Fail(e.what());
  }
  return ck;
}

void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path) {
  const std::string text = SerializeCheckpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str());
}

}  // namespace sqen
