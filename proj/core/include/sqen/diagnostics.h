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

// Decision-boundary rasters, weight-norm series and their SVG/CSV renderings.

#ifndef SQEN_DIAGNOSTICS_H_
#define SQEN_DIAGNOSTICS_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sqen/calibration.h"
#include "sqen/data.h"
#include "sqen/mlp.h"
#include "sqen/trainer.h"

namespace sqen {

struct RasterBounds {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
};

inline constexpr std::size_t kDefaultRasterResolution = 200;

// Probability of class 0 at each cell center of a resolution x resolution
// grid. Cell (i, j) has center
//   x = x_min + (i + 0.5) * (x_max - x_min) / resolution
//   y = y_min + (j + 0.5) * (y_max - y_min) / resolution
// and is stored at probs[j * resolution + i] (rows run along y).
struct BoundaryRaster {
  RasterBounds bounds;
  std::size_t resolution = 0;
  std::vector<double> probs;

  double CellX(std::size_t i) const;
  double CellY(std::size_t j) const;
  double At(std::size_t i, std::size_t j) const {
    return probs[j * resolution + i];
  }
};

// Bounding box of the first two features, widened by `pad` times the range
// on each side.
RasterBounds BoundsFromData(const Dataset& data, double pad = 0.1);

// p = 1 / (1 + exp(f_1 - f_0)), exactly 0.5 where f_0 == f_1.
// Throws InvalidArgument unless the model maps R^2 to 2 classes and
// resolution >= 2 with non-degenerate bounds.
BoundaryRaster ComputeBoundaryRaster(
    const MlpParameters& params, const RasterBounds& bounds,
    std::size_t resolution = kDefaultRasterResolution);

// Long-form CSV "x,y,p", one row per cell in storage order.
std::string RasterToCsv(const BoundaryRaster& raster);

struct SeriesRow {
  int epoch = 0;  // 1-based
  std::string name;
  double norm = 0.0;
};

// Long-form (epoch, name, norm) table, epoch-major then by name.
// Throws InvalidArgument if the histories differ in length or a name repeats.
std::vector<SeriesRow> WeightNormSeries(
    const std::vector<std::pair<std::string, TrainHistory>>& histories);

std::string SeriesToCsv(const std::vector<SeriesRow>& rows);

struct SvgStyle {
  int width = 480;
  int height = 400;
  std::string title;
  std::string accuracy_color = "#1f77b4";
  std::string gap_color = "#ff7f0e";
  std::string class0_color = "#d62728";
  std::string class1_color = "#1f4fd6";
  std::string boundary_color = "#ffffff";
  // One per series in name order; cycles if shorter.
  std::vector<std::string> series_colors = {"#d62728", "#1f77b4", "#2ca02c",
                                            "#9467bd", "#8c564b"};
};

// Accuracy bar per bin, plus a gap bar spanning from the top of the
// accuracy bar to the bin's mean confidence; identity diagonal for
// reference. Each bar carries data-* attributes with its values.
std::string ReliabilitySvg(const CalibrationReport& report,
                           const SvgStyle& style = {});

// Fraction of samples per confidence bin.
std::string HistogramSvg(const CalibrationReport& report,
                         const SvgStyle& style = {});

// Color-mapped grid (class1_color at p=0, white at 0.5, class0_color at
// p=1) with the p = 0.5 level drawn as line segments. `points` may overlay
// 2-D samples.
std::string RasterSvg(const BoundaryRaster& raster, const SvgStyle& style = {},
                      const Dataset* points = nullptr);

// One polyline per series name.
std::string WeightNormSvg(const std::vector<SeriesRow>& rows,
                          const SvgStyle& style = {});

}  // namespace sqen

#endif  // SQEN_DIAGNOSTICS_H_
