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

#ifndef GRADPIX_BENCH_H_
#define GRADPIX_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gradpix/predictors.h"

namespace gradpix {

// One benchmark measurement: a single (image, predictor) pair.
struct BenchRecord {
  std::string filename;  // input basename, e.g. "kodim01.png"
  uint32_t width = 0;
  uint32_t height = 0;
  uint64_t original_size_bytes = 0;    // input file size on disk
  uint64_t compressed_size_bytes = 0;  // full container size
  double time_seconds = 0.0;           // encode_image() wall time
  double percent_of_original = 0.0;    // 100 * compressed / original
  double compression_ratio = 0.0;      // original / compressed
  std::string predictor;               // predictor tag, e.g. "gap"

  // When a source image cannot be read the record is kept for reporting but
  // marked failed; failed records never appear in the CSV.
  bool ok = true;
  std::string error;
};

struct BenchConfig {
  std::filesystem::path input_dir;   // scanned for *.png
  std::filesystem::path output_dir;  // receives <stem>.<predictor>.gpx; may
                                     // be empty to skip writing containers
  std::filesystem::path csv_path;    // may be empty to skip the CSV
  // Predictors to run per image; defaults to med, ged, gap when empty.
  std::vector<PredictorKind> predictors;
  // Worker thread count for the (image, predictor) task pool.
  int workers = 10;
  // Decode each container and compare with the source image. A mismatch is
  // a codec bug and aborts the whole run.
  bool verify = true;
};

// Per-predictor aggregate over successful records.
struct PredictorSummary {
  std::string predictor;
  size_t count = 0;
  double mean_compressed_size_bytes = 0.0;
  double mean_compression_ratio = 0.0;
  double mean_time_seconds = 0.0;
};

// The column order of every CSV produced or consumed here.
inline constexpr const char kCsvHeader[] =
    "filename,width,height,original_size_bytes,compressed_size_bytes,"
    "time_seconds,percent_of_original,compression_ratio,predictor";

// All *.png files directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_png_files(
    const std::filesystem::path& dir);

// Runs every (image, predictor) pair from cfg.input_dir on a pool of
// cfg.workers threads; writes containers to cfg.output_dir and the CSV to
// cfg.csv_path (each skipped when the path is empty). Returns the records
// sorted by (filename, predictor) regardless of completion order.
// Unreadable inputs produce failed records plus one stderr warning per
// file; an empty corpus, a verification mismatch or any internal error
// aborts with an exception.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

// Measures one (already loaded) image under one predictor. `container_out`,
// when non-null, receives the encoded container so callers can save it.
BenchRecord bench_one(const RasterImage& img, const std::string& filename,
                      uint64_t original_size_bytes, const PredictorKind& kind,
                      bool verify, std::vector<uint8_t>* container_out = nullptr);

// Arithmetic means grouped by predictor tag, in lexicographic tag order.
// Raises on empty input.
std::vector<PredictorSummary> summarize(
    const std::vector<BenchRecord>& records);

// Serializes successful records as RFC-4180 CSV: header row, one row per
// record, floating-point columns with six decimals, LF line endings.
void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);
void write_csv_file(const std::vector<BenchRecord>& records,
                    const std::filesystem::path& path);

// Parses a CSV in the same schema (used by the plot command). Raises on a
// missing or reordered header or malformed rows.
std::vector<BenchRecord> parse_csv(std::istream& in);
std::vector<BenchRecord> parse_csv_file(const std::filesystem::path& path);

// Metric column accessor for plotting: "compression_ratio" or
// "time_seconds". Raises on other names.
double record_metric(const BenchRecord& record, const std::string& metric);

}  // namespace gradpix

#endif  // GRADPIX_BENCH_H_
