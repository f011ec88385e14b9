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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gradpix/bench.h"
#include "gradpix/boxplot.h"
#include "gradpix/error.h"

using gradpix::BoxplotGroup;
using gradpix::BoxStats;
using gradpix::Error;
using gradpix::ErrorKind;

namespace {

namespace fs = std::filesystem;

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "gradpix_boxplot_test";
  fs::create_directories(dir);
  return dir;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("quantile interpolates linearly between order statistics") {
  const std::vector<double> v = {1, 2, 3, 4, 100};
  CHECK(gradpix::quantile(v, 0.0) == 1);
  CHECK(gradpix::quantile(v, 0.25) == 2);
  CHECK(gradpix::quantile(v, 0.5) == 3);
  CHECK(gradpix::quantile(v, 0.75) == 4);
  CHECK(gradpix::quantile(v, 1.0) == 100);
  CHECK(gradpix::quantile(v, 0.1) == doctest::Approx(1.4));
  CHECK(gradpix::quantile(v, 0.875) == doctest::Approx(52.0));

  CHECK(gradpix::quantile({10}, 0.3) == 10);
  CHECK(gradpix::quantile({1, 2}, 0.5) == doctest::Approx(1.5));
  CHECK(gradpix::quantile({1, 2}, 0.25) == doctest::Approx(1.25));

  // Out-of-range p clamps to the extremes.
  CHECK(gradpix::quantile(v, -0.5) == 1);
  CHECK(gradpix::quantile(v, 2.0) == 100);

  CHECK_THROWS_AS((void)gradpix::quantile({}, 0.5), Error);
}

TEST_CASE("box stats on the hand-checked outlier sample") {
  // Unsorted on purpose: the function must sort internally.
  const BoxStats s = gradpix::compute_box_stats({100, 3, 1, 4, 2});
  CHECK(s.count == 5);
  CHECK(s.minimum == 1);
  CHECK(s.maximum == 100);
  CHECK(s.q1 == 2);
  CHECK(s.median == 3);
  CHECK(s.q3 == 4);
  // IQR = 2, fences at -1 and 7: 100 is the single outlier, whiskers reach
  // the most extreme in-fence samples.
  CHECK(s.whisker_low == 1);
  CHECK(s.whisker_high == 4);
  REQUIRE(s.outliers.size() == 1);
  CHECK(s.outliers[0] == 100);
}

TEST_CASE("box stats without outliers keep whiskers at min and max") {
  const BoxStats s = gradpix::compute_box_stats({5, 1, 4, 2, 3});
  CHECK(s.q1 == 2);
  CHECK(s.median == 3);
  CHECK(s.q3 == 4);
  CHECK(s.whisker_low == 1);
  CHECK(s.whisker_high == 5);
  CHECK(s.outliers.empty());
}

TEST_CASE("box stats flag low outliers too") {
  const BoxStats s = gradpix::compute_box_stats({-100, 2, 3, 4, 5});
  CHECK(s.q1 == 2);
  CHECK(s.q3 == 4);
  CHECK(s.whisker_low == 2);  // smallest sample above the -1 fence
  CHECK(s.whisker_high == 5);
  REQUIRE(s.outliers.size() == 1);
  CHECK(s.outliers[0] == -100);
}

TEST_CASE("box stats degenerate groups") {
  const BoxStats constant = gradpix::compute_box_stats({5, 5, 5, 5});
  CHECK(constant.q1 == 5);
  CHECK(constant.median == 5);
  CHECK(constant.q3 == 5);
  CHECK(constant.whisker_low == 5);
  CHECK(constant.whisker_high == 5);
  CHECK(constant.outliers.empty());

  const BoxStats single = gradpix::compute_box_stats({7});
  CHECK(single.count == 1);
  CHECK(single.median == 7);
  CHECK(single.whisker_low == 7);
  CHECK(single.whisker_high == 7);

  const BoxStats even = gradpix::compute_box_stats({4, 1, 3, 2});
  CHECK(even.median == doctest::Approx(2.5));
  CHECK(even.q1 == doctest::Approx(1.75));
  CHECK(even.q3 == doctest::Approx(3.25));

  CHECK_THROWS_AS((void)gradpix::compute_box_stats({}), Error);
}

TEST_CASE("svg render contains one box per group and one dot per outlier") {
  const std::vector<BoxplotGroup> groups = {
      {"gap", {1, 2, 3, 4, 100}},          // one high outlier
      {"ged", {2, 3, 4, 5, 6}},            // none
      {"med", {-50, 10, 11, 12, 13, 90}},  // one low, one high
  };
  const std::string svg =
      gradpix::render_boxplot_svg(groups, "ratio by predictor", "ratio");

  CHECK(svg.rfind("<?xml version=\"1.0\"", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(count_occurrences(svg, "</svg>") == 1);

  // One background rect plus one quartile box per group.
  CHECK(count_occurrences(svg, "<rect") == 1 + groups.size());
  // Outlier circles: 1 + 0 + 2.
  CHECK(count_occurrences(svg, "<circle") == 3);
  // Each group label once, in the given order.
  const size_t gap_pos = svg.find(">gap</text>");
  const size_t ged_pos = svg.find(">ged</text>");
  const size_t med_pos = svg.find(">med</text>");
  REQUIRE(gap_pos != std::string::npos);
  REQUIRE(ged_pos != std::string::npos);
  REQUIRE(med_pos != std::string::npos);
  CHECK(gap_pos < ged_pos);
  CHECK(ged_pos < med_pos);
  // Title and axis label present.
  CHECK(svg.find("ratio by predictor") != std::string::npos);
  // 5 axis ticks plus axis, baseline, and 6 whisker lines + 3 medians.
  CHECK(count_occurrences(svg, "<line") == 5 + 2 + groups.size() * 5);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("svg escapes markup in labels") {
  const std::vector<BoxplotGroup> groups = {{"a<b&c", {1, 2, 3}}};
  const std::string svg =
      gradpix::render_boxplot_svg(groups, "t<i>tle</i> & more", "\"axis\"");
  CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
  CHECK(svg.find("t&lt;i&gt;tle&lt;/i&gt; &amp; more") != std::string::npos);
  CHECK(svg.find("&quot;axis&quot;") != std::string::npos);
  CHECK(svg.find("<i>") == std::string::npos);
}

TEST_CASE("svg handles a constant-valued group without degenerating") {
  const std::vector<BoxplotGroup> groups = {{"k", {5, 5, 5}}};
  const std::string svg = gradpix::render_boxplot_svg(groups, "t", "v");
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(count_occurrences(svg, "<rect") == 2);
}

TEST_CASE("svg rejects empty input") {
  CHECK_THROWS_AS((void)gradpix::render_boxplot_svg({}, "t", "v"), Error);
  const std::vector<BoxplotGroup> with_empty = {{"a", {1.0}}, {"b", {}}};
  try {
    (void)gradpix::render_boxplot_svg(with_empty, "t", "v");
    REQUIRE_MESSAGE(false, "empty group was accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyInput);
  }
}

TEST_CASE("write_boxplot_svg writes exactly the rendered text") {
  const std::vector<BoxplotGroup> groups = {{"only", {1, 2, 3, 4}}};
  const fs::path path = test_dir() / "out.svg";
  gradpix::write_boxplot_svg(groups, "title", "axis", path);
  CHECK(read_text(path) == gradpix::render_boxplot_svg(groups, "title", "axis"));
}

TEST_CASE("plot_boxplot groups a csv by predictor") {
  std::vector<gradpix::BenchRecord> records;
  auto add = [&records](const std::string& name, uint64_t comp,
                        const std::string& pred) {
    gradpix::BenchRecord r;
    r.filename = name;
    r.width = 4;
    r.height = 4;
    r.original_size_bytes = 1000;
    r.compressed_size_bytes = comp;
    r.time_seconds = 0.005;
    r.percent_of_original = 100.0 * double(comp) / 1000.0;
    r.compression_ratio = 1000.0 / double(comp);
    r.predictor = pred;
    records.push_back(r);
  };
  add("a.png", 500, "med");
  add("b.png", 250, "med");
  add("a.png", 400, "gap");
  add("b.png", 200, "gap");

  const fs::path csv = test_dir() / "plot_in.csv";
  const fs::path svg = test_dir() / "plot_out.svg";
  gradpix::write_csv_file(records, csv);

  CHECK(gradpix::plot_boxplot(csv, svg, "compression_ratio") == 2);
  const std::string text = read_text(svg);
  CHECK(text.find(">gap</text>") != std::string::npos);
  CHECK(text.find(">med</text>") != std::string::npos);
  CHECK(text.find("compression_ratio by predictor") != std::string::npos);

  CHECK(gradpix::plot_boxplot(csv, svg, "time_seconds") == 2);

  // Unknown metric and empty CSV are rejected.
  CHECK_THROWS_AS((void)gradpix::plot_boxplot(csv, svg, "width"), Error);
  const fs::path empty_csv = test_dir() / "empty.csv";
  {
    std::ofstream out(empty_csv, std::ios::binary);
    out << gradpix::kCsvHeader << "\n";
  }
  try {
    (void)gradpix::plot_boxplot(empty_csv, svg, "compression_ratio");
    REQUIRE_MESSAGE(false, "empty CSV was accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyInput);
  }
}
