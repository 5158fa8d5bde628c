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

#include "sqen/diagnostics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "sqen/config.h"
#include "sqen/errors.h"

namespace sqen {
namespace {

// Fixed-precision formatting keeps SVG output byte-stable.
std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  // Avoid "-0.00".
  if (std::string_view(buf).find_first_not_of("-0.") == std::string::npos) {
    std::snprintf(buf, sizeof(buf), "%.*f", digits, 0.0);
  }
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Rgb {
  int r, g, b;
};

Rgb ParseHexColor(const std::string& hex) {
  unsigned r = 0, g = 0, b = 0;
  if (hex.size() != 7 || hex[0] != '#' ||
      std::sscanf(hex.c_str() + 1, "%02x%02x%02x", &r, &g, &b) != 3) {
    throw InvalidArgument("SvgStyle: colors must be #rrggbb, got '" + hex +
                          "'");
  }
  return {static_cast<int>(r), static_cast<int>(g), static_cast<int>(b)};
}

std::string Mix(const Rgb& a, const Rgb& b, double t) {
  const auto lerp = [t](int x, int y) {
    return static_cast<int>(std::lround(x + (y - x) * t));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", lerp(a.r, b.r),
                lerp(a.g, b.g), lerp(a.b, b.b));
  return buf;
}

// Plot area inside the SVG canvas.
struct Frame {
  double left, top, width, height;

  double X(double u) const { return left + u * width; }
  double Y(double v) const { return top + (1.0 - v) * height; }
};

Frame MakeFrame(const SvgStyle& style) {
  if (style.width < 120 || style.height < 120) {
    throw InvalidArgument("SvgStyle: canvas must be at least 120x120");
  }
  return {56.0, style.title.empty() ? 16.0 : 36.0, style.width - 72.0,
          style.height - (style.title.empty() ? 16.0 : 36.0) - 48.0};
}

std::string Header(const SvgStyle& style) {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(style.width) + "\" height=\"" +
       std::to_string(style.height) + "\" viewBox=\"0 0 " +
       std::to_string(style.width) + " " + std::to_string(style.height) +
       "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) +
       "\" height=\"" + std::to_string(style.height) +
       "\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty()) {
    s += "<text x=\"" + Fixed(style.width / 2.0) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" +
         Escape(style.title) + "</text>\n";
  }
  return s;
}

// Unit-square axes with ticks at 0, 0.2, ..., 1 scaled to [lo, hi].
std::string Axes(const Frame& f, const std::string& x_label,
                 const std::string& y_label, double x_lo, double x_hi,
                 double y_lo, double y_hi) {
  std::string s;
  s += "<g class=\"axes\" stroke=\"#000000\" fill=\"none\">\n";
  s += "<rect x=\"" + Fixed(f.left) + "\" y=\"" + Fixed(f.top) +
       "\" width=\"" + Fixed(f.width) + "\" height=\"" + Fixed(f.height) +
       "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double u = i / 5.0;
    s += "<line x1=\"" + Fixed(f.X(u)) + "\" y1=\"" + Fixed(f.Y(0)) +
         "\" x2=\"" + Fixed(f.X(u)) + "\" y2=\"" + Fixed(f.Y(0) + 4) +
         "\"/>\n";
    s += "<line x1=\"" + Fixed(f.X(0) - 4) + "\" y1=\"" + Fixed(f.Y(u)) +
         "\" x2=\"" + Fixed(f.X(0)) + "\" y2=\"" + Fixed(f.Y(u)) + "\"/>\n";
  }
  s += "</g>\n<g class=\"tick-labels\" fill=\"#000000\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double u = i / 5.0;
    s += "<text x=\"" + Fixed(f.X(u)) + "\" y=\"" + Fixed(f.Y(0) + 16) +
         "\" text-anchor=\"middle\">" + Fixed(x_lo + u * (x_hi - x_lo), 2) +
         "</text>\n";
    s += "<text x=\"" + Fixed(f.X(0) - 6) + "\" y=\"" + Fixed(f.Y(u) + 4) +
         "\" text-anchor=\"end\">" + Fixed(y_lo + u * (y_hi - y_lo), 2) +
         "</text>\n";
  }
  s += "<text x=\"" + Fixed(f.X(0.5)) + "\" y=\"" + Fixed(f.Y(0) + 34) +
       "\" text-anchor=\"middle\">" + Escape(x_label) + "</text>\n";
  s += "<text transform=\"translate(14," + Fixed(f.Y(0.5)) +
       ") rotate(-90)\" text-anchor=\"middle\">" + Escape(y_label) +
       "</text>\n";
  s += "</g>\n";
  return s;
}

std::string Rect(double x, double y, double w, double h,
                 const std::string& fill, const std::string& extra) {
  return "<rect x=\"" + Fixed(x) + "\" y=\"" + Fixed(y) + "\" width=\"" +
         Fixed(w) + "\" height=\"" + Fixed(h) + "\" fill=\"" + fill + "\"" +
         extra + "/>\n";
}

}  // namespace

double BoundaryRaster::CellX(std::size_t i) const {
  return bounds.x_min + (static_cast<double>(i) + 0.5) *
                            (bounds.x_max - bounds.x_min) /
                            static_cast<double>(resolution);
}

double BoundaryRaster::CellY(std::size_t j) const {
  return bounds.y_min + (static_cast<double>(j) + 0.5) *
                            (bounds.y_max - bounds.y_min) /
                            static_cast<double>(resolution);
}

RasterBounds BoundsFromData(const Dataset& data, double pad) {
  if (data.dim() < 2 || data.size() == 0) {
    throw InvalidArgument("BoundsFromData: need 2-D samples");
  }
  RasterBounds b{data.features(0, 0), data.features(0, 0),
                 data.features(0, 1), data.features(0, 1)};
  for (std::size_t i = 0; i < data.size(); ++i) {
    b.x_min = std::min(b.x_min, data.features(i, 0));
    b.x_max = std::max(b.x_max, data.features(i, 0));
    b.y_min = std::min(b.y_min, data.features(i, 1));
    b.y_max = std::max(b.y_max, data.features(i, 1));
  }
  const double dx = std::max(b.x_max - b.x_min, 1e-9) * pad;
  const double dy = std::max(b.y_max - b.y_min, 1e-9) * pad;
  return {b.x_min - dx, b.x_max + dx, b.y_min - dy, b.y_max + dy};
}

BoundaryRaster ComputeBoundaryRaster(const MlpParameters& params,
                                     const RasterBounds& bounds,
                                     std::size_t resolution) {
  const auto& arch = params.architecture;
  if (arch.class_count != 2) {
    throw InvalidArgument("boundary raster needs a 2-class model, got " +
                          std::to_string(arch.class_count) + " classes");
  }
  if (arch.input_dim != 2) {
    throw InvalidArgument("boundary raster needs 2-D inputs, got " +
                          std::to_string(arch.input_dim));
  }
  if (resolution < 2) {
    throw InvalidArgument("boundary raster resolution must be >= 2");
  }
  if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)) {
    throw InvalidArgument("boundary raster bounds are empty");
  }
  BoundaryRaster raster{bounds, resolution,
                        std::vector<double>(resolution * resolution)};
  std::array<double, 2> x{};
  for (std::size_t j = 0; j < resolution; ++j) {
    x[1] = raster.CellY(j);
    for (std::size_t i = 0; i < resolution; ++i) {
      x[0] = raster.CellX(i);
      const auto f = Forward(params, x);
      raster.probs[j * resolution + i] = 1.0 / (1.0 + std::exp(f[1] - f[0]));
    }
  }
  return raster;
}

std::string RasterToCsv(const BoundaryRaster& raster) {
  std::string out = "x,y,p\n";
  for (std::size_t j = 0; j < raster.resolution; ++j) {
    for (std::size_t i = 0; i < raster.resolution; ++i) {
      out += FormatNumber(raster.CellX(i)) + "," +
             FormatNumber(raster.CellY(j)) + "," +
             FormatNumber(raster.At(i, j)) + "\n";
    }
  }
  return out;
}

std::vector<SeriesRow> WeightNormSeries(
    const std::vector<std::pair<std::string, TrainHistory>>& histories) {
  std::vector<SeriesRow> rows;
  if (histories.empty()) return rows;
  const std::size_t epochs = histories.front().second.size();
  std::map<std::string, const TrainHistory*> by_name;
  for (const auto& [name, history] : histories) {
    if (history.size() != epochs) {
      throw InvalidArgument("WeightNormSeries: '" + name + "' has " +
                            std::to_string(history.size()) +
                            " epochs, expected " + std::to_string(epochs));
    }
    if (!by_name.emplace(name, &history).second) {
      throw InvalidArgument("WeightNormSeries: duplicate series '" + name +
                            "'");
    }
  }
  rows.reserve(epochs * by_name.size());
  for (std::size_t e = 0; e < epochs; ++e) {
    for (const auto& [name, history] : by_name) {
      rows.push_back({static_cast<int>(e + 1), name,
                      (*history)[e].last_layer_norm});
    }
  }
  return rows;
}

std::string SeriesToCsv(const std::vector<SeriesRow>& rows) {
  std::string out = "epoch,name,norm\n";
  for (const auto& r : rows) {
    out += std::to_string(r.epoch) + "," + r.name + "," +
           FormatNumber(r.norm) + "\n";
  }
  return out;
}

std::string ReliabilitySvg(const CalibrationReport& report,
                           const SvgStyle& style) {
  const Frame f = MakeFrame(style);
  std::string s = Header(style);
  s += Axes(f, "confidence", "accuracy", 0.0, 1.0, 0.0, 1.0);
  const double k = static_cast<double>(report.bin_count);
  s += "<g class=\"bars\">\n";
  for (const auto& bin : report.bins) {
    if (bin.count == 0) continue;
    const double u0 = (static_cast<double>(bin.index) - 1.0) / k;
    const double x = f.X(u0);
    const double w = f.width / k;
    const std::string attrs =
        " stroke=\"#333333\" stroke-width=\"0.5\" data-bin=\"" +
        std::to_string(bin.index) + "\" data-count=\"" +
        std::to_string(bin.count) + "\"";
    s += Rect(x, f.Y(bin.accuracy), w, f.Y(0) - f.Y(bin.accuracy),
              style.accuracy_color,
              " class=\"accuracy\"" + attrs + " data-accuracy=\"" +
                  Fixed(bin.accuracy, 6) + "\"");
    const double lo = std::min(bin.accuracy, bin.confidence);
    const double hi = std::max(bin.accuracy, bin.confidence);
    s += Rect(x, f.Y(hi), w, f.Y(lo) - f.Y(hi), style.gap_color,
              " class=\"gap\" fill-opacity=\"0.6\"" + attrs +
                  " data-confidence=\"" + Fixed(bin.confidence, 6) +
                  "\" data-gap=\"" + Fixed(bin.gap(), 6) + "\"");
  }
  s += "</g>\n";
  s += "<line class=\"identity\" x1=\"" + Fixed(f.X(0)) + "\" y1=\"" +
       Fixed(f.Y(0)) + "\" x2=\"" + Fixed(f.X(1)) + "\" y2=\"" +
       Fixed(f.Y(1)) +
       "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
  s += "<text x=\"" + Fixed(f.X(0) + 8) + "\" y=\"" + Fixed(f.Y(1) + 16) +
       "\">ECE = " + Fixed(100.0 * report.ece, 2) + "%</text>\n";
  s += "</svg>\n";
  return s;
}

std::string HistogramSvg(const CalibrationReport& report,
                         const SvgStyle& style) {
  const Frame f = MakeFrame(style);
  const auto fractions = HistogramFractions(report);
  std::string s = Header(style);
  s += Axes(f, "confidence", "fraction of samples", 0.0, 1.0, 0.0, 1.0);
  const double k = static_cast<double>(report.bin_count);
  s += "<g class=\"bars\">\n";
  for (std::size_t b = 0; b < fractions.size(); ++b) {
    const double frac = fractions[b];
    const double x = f.X(static_cast<double>(b) / k);
    s += Rect(x, f.Y(frac), f.width / k, f.Y(0) - f.Y(frac),
              style.accuracy_color,
              " class=\"fraction\" stroke=\"#333333\" stroke-width=\"0.5\" "
              "data-bin=\"" +
                  std::to_string(b + 1) + "\" data-fraction=\"" +
                  Fixed(frac, 6) + "\"");
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::string RasterSvg(const BoundaryRaster& raster, const SvgStyle& style,
                      const Dataset* points) {
  const Frame f = MakeFrame(style);
  const auto& b = raster.bounds;
  const double sx = (b.x_max - b.x_min);
  const double sy = (b.y_max - b.y_min);
  const auto px = [&](double x) { return f.X((x - b.x_min) / sx); };
  const auto py = [&](double y) { return f.Y((y - b.y_min) / sy); };
  const Rgb c0 = ParseHexColor(style.class0_color);
  const Rgb c1 = ParseHexColor(style.class1_color);
  const Rgb white{255, 255, 255};

  std::string s = Header(style);
  const std::size_t res = raster.resolution;
  const double cw = f.width / static_cast<double>(res);
  const double ch = f.height / static_cast<double>(res);
  s += "<g class=\"raster\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t j = 0; j < res; ++j) {
    for (std::size_t i = 0; i < res; ++i) {
      const double p = raster.At(i, j);
      const std::string fill =
          p >= 0.5 ? Mix(white, c0, 2.0 * (p - 0.5)) : Mix(white, c1, 1.0 - 2.0 * p);
      // Slight overlap hides seams between cells.
      s += Rect(f.left + i * cw, f.top + (res - 1 - j) * ch, cw + 0.05,
                ch + 0.05, fill, "");
    }
  }
  s += "</g>\n";

  // p = 0.5 contour by marching squares over cell centers.
  std::string path;
  const auto level = [&](std::size_t i, std::size_t j) {
    return raster.At(i, j) - 0.5;
  };
  const auto cross = [](double a, double b) {
    return a == b ? 0.5 : a / (a - b);
  };
  for (std::size_t j = 0; j + 1 < res; ++j) {
    for (std::size_t i = 0; i + 1 < res; ++i) {
      const double v00 = level(i, j), v10 = level(i + 1, j);
      const double v01 = level(i, j + 1), v11 = level(i + 1, j + 1);
      const double x0 = raster.CellX(i), x1 = raster.CellX(i + 1);
      const double y0 = raster.CellY(j), y1 = raster.CellY(j + 1);
      std::vector<std::pair<double, double>> hits;
      if ((v00 >= 0) != (v10 >= 0)) {
        hits.emplace_back(x0 + cross(v00, v10) * (x1 - x0), y0);
      }
      if ((v10 >= 0) != (v11 >= 0)) {
        hits.emplace_back(x1, y0 + cross(v10, v11) * (y1 - y0));
      }
      if ((v01 >= 0) != (v11 >= 0)) {
        hits.emplace_back(x0 + cross(v01, v11) * (x1 - x0), y1);
      }
      if ((v00 >= 0) != (v01 >= 0)) {
        hits.emplace_back(x0, y0 + cross(v00, v01) * (y1 - y0));
      }
      for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
        path += "M" + Fixed(px(hits[h].first)) + " " +
                Fixed(py(hits[h].second)) + "L" +
                Fixed(px(hits[h + 1].first)) + " " +
                Fixed(py(hits[h + 1].second));
      }
    }
  }
  if (!path.empty()) {
    s += "<path class=\"boundary\" d=\"" + path + "\" stroke=\"" +
         style.boundary_color + "\" stroke-width=\"2\" fill=\"none\"/>\n";
  }

  if (points != nullptr && points->dim() >= 2) {
    s += "<g class=\"points\" stroke=\"#000000\" stroke-width=\"0.3\">\n";
    for (std::size_t i = 0; i < points->size(); ++i) {
      const double x = points->features(i, 0);
      const double y = points->features(i, 1);
      if (x < b.x_min || x > b.x_max || y < b.y_min || y > b.y_max) continue;
      s += "<circle cx=\"" + Fixed(px(x)) + "\" cy=\"" + Fixed(py(y)) +
           "\" r=\"1.6\" fill=\"" +
           (points->labels[i] == 0 ? style.class0_color : style.class1_color) +
           "\"/>\n";
    }
    s += "</g>\n";
  }
  s += Axes(f, "x", "y", b.x_min, b.x_max, b.y_min, b.y_max);
  s += "</svg>\n";
  return s;
}

std::string WeightNormSvg(const std::vector<SeriesRow>& rows,
                          const SvgStyle& style) {
  const Frame f = MakeFrame(style);
  std::map<std::string, std::vector<std::pair<int, double>>> series;
  int max_epoch = 1;
  double max_norm = 0.0;
  for (const auto& r : rows) {
    series[r.name].emplace_back(r.epoch, r.norm);
    max_epoch = std::max(max_epoch, r.epoch);
    max_norm = std::max(max_norm, r.norm);
  }
  if (max_norm <= 0.0) max_norm = 1.0;
  max_norm *= 1.05;

  std::string s = Header(style);
  s += Axes(f, "epoch", "last-layer weight norm", 0.0, max_epoch, 0.0,
            max_norm);
  std::size_t color = 0;
  double legend_y = f.top + 14;
  for (const auto& [name, points] : series) {
    const std::string& stroke =
        style.series_colors.empty()
            ? style.accuracy_color
            : style.series_colors[color++ % style.series_colors.size()];
    std::string pts;
    for (const auto& [epoch, norm] : points) {
      if (!pts.empty()) pts += ' ';
      pts += Fixed(f.X(static_cast<double>(epoch) / max_epoch)) + "," +
             Fixed(f.Y(norm / max_norm));
    }
    s += "<polyline class=\"series\" data-name=\"" + Escape(name) +
         "\" points=\"" + pts + "\" fill=\"none\" stroke=\"" + stroke +
         "\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + Fixed(f.X(0.62)) + "\" y=\"" + Fixed(legend_y) +
         "\" fill=\"" + stroke + "\">" + Escape(name) + "</text>\n";
    legend_y += 14;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace sqen
