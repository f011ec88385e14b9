// Copyright (c) the Gradpix Project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRADPIX_BOXPLOT_H_
#define GRADPIX_BOXPLOT_H_

#include <filesystem>
#include <string>
#include <vector>

namespace gradpix {

// Five-number summary with Tukey outliers for one group of samples.
struct BoxStats {
  size_t count = 0;
  double minimum = 0.0;
  double maximum = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  // Whisker ends: the most extreme samples still within 1.5 * IQR of the
  // quartiles. Samples beyond them are listed as outliers (sorted).
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

// Linear-interpolation quantile (the common "type 7" rule: the p-quantile of
// n sorted samples sits at rank p * (n - 1)). `sorted` must be nonempty and
// ascending; p in [0, 1].
double quantile(const std::vector<double>& sorted, double p);

// Computes quartiles, 1.5*IQR whiskers and outliers. Raises on an empty
// group.
BoxStats compute_box_stats(std::vector<double> values);

struct BoxplotGroup {
  std::string label;
  std::vector<double> values;
};

// Renders a standalone SVG 1.1 document with one box per group, in the given
// group order: quartile box with median line, whiskers with caps, one dot per
// outlier, a labeled value axis and one tick per group label. Raises if
// there are no groups or any group is empty.
std::string render_boxplot_svg(const std::vector<BoxplotGroup>& groups,
                               const std::string& title,
                               const std::string& value_axis_label);

void write_boxplot_svg(const std::vector<BoxplotGroup>& groups,
                       const std::string& title,
                       const std::string& value_axis_label,
                       const std::filesystem::path& path);

// Reads a benchmark CSV, groups one metric by predictor (groups in
// lexicographic order) and writes the boxplot SVG. Returns the number of
// predictor groups plotted.
size_t plot_boxplot(const std::filesystem::path& csv_path,
                    const std::filesystem::path& out_svg_path,
                    const std::string& metric);

}  // namespace gradpix

#endif  // GRADPIX_BOXPLOT_H_
