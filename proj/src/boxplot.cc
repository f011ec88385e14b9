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

#include "gradpix/boxplot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gradpix/bench.h"
#include "gradpix/error.h"

namespace gradpix {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty())
    fail(ErrorKind::kEmptyInput, "quantile of an empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = p * double(sorted.size() - 1);
  const size_t lo = size_t(h);
  const double frac = h - double(lo);
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxStats compute_box_stats(std::vector<double> values) {
  if (values.empty())
    fail(ErrorKind::kEmptyInput, "cannot compute box statistics of an empty group");
  std::sort(values.begin(), values.end());

  BoxStats s;
  s.count = values.size();
  s.minimum = values.front();
  s.maximum = values.back();
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);

  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  // Whiskers reach the most extreme samples still inside the fences; the
  // median is always inside, so both are well defined.
  s.whisker_low = s.median;
  s.whisker_high = s.median;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      s.whisker_low = std::min(s.whisker_low, v);
      s.whisker_high = std::max(s.whisker_high, v);
    }
  }
  return s;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string render_boxplot_svg(const std::vector<BoxplotGroup>& groups,
                               const std::string& title,
                               const std::string& value_axis_label) {
  if (groups.empty()) fail(ErrorKind::kEmptyInput, "no groups to plot");

  std::vector<BoxStats> stats;
  stats.reserve(groups.size());
  double vmin = 0.0, vmax = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].values.empty())
      fail(ErrorKind::kEmptyInput,
           "group '" + groups[i].label + "' has no values");
    stats.push_back(compute_box_stats(groups[i].values));
    if (i == 0) {
      vmin = stats[i].minimum;
      vmax = stats[i].maximum;
    } else {
      vmin = std::min(vmin, stats[i].minimum);
      vmax = std::max(vmax, stats[i].maximum);
    }
  }
  double span = vmax - vmin;
  if (span <= 0.0) span = std::max(1.0, std::fabs(vmax));
  vmin -= span * 0.05;
  vmax += span * 0.05;

  constexpr double kTop = 46.0, kBottom = 56.0, kLeft = 76.0, kRight = 24.0;
  constexpr double kPlotH = 300.0, kPerGroup = 96.0, kBoxW = 44.0;
  const double plot_w = kPerGroup * double(groups.size());
  const double width = kLeft + plot_w + kRight;
  const double height = kTop + kPlotH + kBottom;

  auto y_of = [&](double v) {
    return kTop + kPlotH * (vmax - v) / (vmax - vmin);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << num(width) << "\" height=\"" << num(height) << "\" viewBox=\"0 0 "
      << num(width) << " " << num(height) << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  // Value axis with 5 ticks.
  svg << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop)
      << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(kTop + kPlotH)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = vmin + (vmax - vmin) * double(t) / 4.0;
    const double y = y_of(v);
    svg << "  <line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y)
        << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << num(kLeft - 9) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << xml_escape(tick_label(v)) << "</text>\n";
  }
  svg << "  <text x=\"16\" y=\"" << num(kTop + kPlotH / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << num(kTop + kPlotH / 2) << ")\">" << xml_escape(value_axis_label)
      << "</text>\n";

  // Baseline under the boxes.
  svg << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + kPlotH)
      << "\" x2=\"" << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + kPlotH)
      << "\" stroke=\"black\"/>\n";

  for (size_t i = 0; i < groups.size(); ++i) {
    const BoxStats& s = stats[i];
    const double cx = kLeft + kPerGroup * (double(i) + 0.5);
    const double x0 = cx - kBoxW / 2, x1 = cx + kBoxW / 2;
    const double cap = kBoxW / 2;

    // Whisker stems and caps.
    svg << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(y_of(s.whisker_high))
        << "\" x2=\"" << num(cx) << "\" y2=\"" << num(y_of(s.q3))
        << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(y_of(s.q1))
        << "\" x2=\"" << num(cx) << "\" y2=\"" << num(y_of(s.whisker_low))
        << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << num(cx - cap / 2) << "\" y1=\""
        << num(y_of(s.whisker_high)) << "\" x2=\"" << num(cx + cap / 2)
        << "\" y2=\"" << num(y_of(s.whisker_high)) << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << num(cx - cap / 2) << "\" y1=\""
        << num(y_of(s.whisker_low)) << "\" x2=\"" << num(cx + cap / 2)
        << "\" y2=\"" << num(y_of(s.whisker_low)) << "\" stroke=\"black\"/>\n";

    // Quartile box and median line.
    svg << "  <rect x=\"" << num(x0) << "\" y=\"" << num(y_of(s.q3))
        << "\" width=\"" << num(kBoxW) << "\" height=\""
        << num(y_of(s.q1) - y_of(s.q3))
        << "\" fill=\"#cfe2f3\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << num(x0) << "\" y1=\"" << num(y_of(s.median))
        << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y_of(s.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";

    for (double v : s.outliers)
      svg << "  <circle cx=\"" << num(cx) << "\" cy=\"" << num(y_of(v))
          << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";

    svg << "  <text x=\"" << num(cx) << "\" y=\"" << num(kTop + kPlotH + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << xml_escape(groups[i].label) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void write_boxplot_svg(const std::vector<BoxplotGroup>& groups,
                       const std::string& title,
                       const std::string& value_axis_label,
                       const std::filesystem::path& path) {
  const std::string svg = render_boxplot_svg(groups, title, value_axis_label);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << svg;
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

size_t plot_boxplot(const std::filesystem::path& csv_path,
                    const std::filesystem::path& out_svg_path,
                    const std::string& metric) {
  const std::vector<BenchRecord> records = parse_csv_file(csv_path);
  if (records.empty())
    fail(ErrorKind::kEmptyInput, "CSV contains no data rows");

  std::map<std::string, std::vector<double>> by_predictor;
  for (const BenchRecord& rec : records)
    by_predictor[rec.predictor].push_back(record_metric(rec, metric));

  std::vector<BoxplotGroup> groups;
  groups.reserve(by_predictor.size());
  for (auto& [tag, values] : by_predictor)
    groups.push_back(BoxplotGroup{tag, std::move(values)});

  write_boxplot_svg(groups, metric + " by predictor", metric, out_svg_path);
  return groups.size();
}

}  // namespace gradpix
