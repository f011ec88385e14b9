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

#include "gradpix/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "gradpix/codec.h"
#include "gradpix/error.h"
#include "gradpix/image.h"

namespace gradpix {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bool record_order(const BenchRecord& a, const BenchRecord& b) {
  if (a.filename != b.filename) return a.filename < b.filename;
  return a.predictor < b.predictor;
}

}  // namespace

std::vector<std::filesystem::path> list_png_files(
    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot list directory " + dir.string() + ": " +
                                   ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

BenchRecord bench_one(const RasterImage& img, const std::string& filename,
                      uint64_t original_size_bytes, const PredictorKind& kind,
                      bool verify, std::vector<uint8_t>* container_out) {
  BenchRecord rec;
  rec.filename = filename;
  rec.width = img.width;
  rec.height = img.height;
  rec.original_size_bytes = original_size_bytes;
  rec.predictor = predictor_tag(kind.variant);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<uint8_t> container = encode_image(img, kind);
  const auto t1 = std::chrono::steady_clock::now();
  rec.time_seconds = std::chrono::duration<double>(t1 - t0).count();
  rec.compressed_size_bytes = container.size();
  rec.percent_of_original = 100.0 * double(rec.compressed_size_bytes) /
                            double(rec.original_size_bytes);
  rec.compression_ratio = double(rec.original_size_bytes) /
                          double(rec.compressed_size_bytes);

  if (verify) {
    const RasterImage round = decode_image(container);
    if (!(round == img))
      fail(ErrorKind::kVerifyFailed, "round-trip mismatch for " + filename +
                                         " under predictor " + rec.predictor);
  }
  if (container_out) *container_out = std::move(container);
  return rec;
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.workers < 1) fail(ErrorKind::kBadArgument, "workers must be >= 1");
  std::vector<PredictorKind> predictors = cfg.predictors;
  if (predictors.empty())
    for (Predictor p : kGradientPredictors) predictors.push_back({p, kDefaultGedThreshold});

  const std::vector<std::filesystem::path> inputs = list_png_files(cfg.input_dir);
  if (inputs.empty())
    fail(ErrorKind::kEmptyInput, "no PNG files in " + cfg.input_dir.string());
  if (!cfg.output_dir.empty())
    std::filesystem::create_directories(cfg.output_dir);

  const size_t total = inputs.size() * predictors.size();
  std::vector<BenchRecord> records(total);

  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= total) return;
      const std::filesystem::path& path = inputs[i / predictors.size()];
      const PredictorKind& kind = predictors[i % predictors.size()];
      BenchRecord& rec = records[i];
      try {
        uint64_t original_size = 0;
        RasterImage img;
        try {
          original_size = std::filesystem::file_size(path);
          img = load_png(path);
        } catch (const std::exception& e) {
          // Unreadable input: record-level failure, not fatal to the run.
          rec.filename = path.filename().string();
          rec.predictor = predictor_tag(kind.variant);
          rec.ok = false;
          rec.error = e.what();
          continue;
        }
        std::vector<uint8_t> container;
        rec = bench_one(img, path.filename().string(), original_size, kind,
                        cfg.verify,
                        cfg.output_dir.empty() ? nullptr : &container);
        if (!cfg.output_dir.empty()) {
          const std::filesystem::path out =
              cfg.output_dir / (path.stem().string() + "." + rec.predictor +
                                ".gpx");
          write_file(out, container);
        }
      } catch (...) {
        // Codec/verify/output errors are bugs or environment failures:
        // abort the whole run with the first one.
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const size_t thread_count = std::min<size_t>(size_t(cfg.workers), total);
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::sort(records.begin(), records.end(), record_order);

  std::string warned;
  for (const BenchRecord& rec : records) {
    if (!rec.ok && rec.filename != warned) {
      std::cerr << "warning: skipping unreadable image " << rec.filename
                << ": " << rec.error << "\n";
      warned = rec.filename;
    }
  }

  if (!cfg.csv_path.empty()) write_csv_file(records, cfg.csv_path);
  return records;
}

std::vector<PredictorSummary> summarize(
    const std::vector<BenchRecord>& records) {
  std::map<std::string, PredictorSummary> by_tag;
  for (const BenchRecord& rec : records) {
    if (!rec.ok) continue;
    PredictorSummary& s = by_tag[rec.predictor];
    s.predictor = rec.predictor;
    s.count += 1;
    s.mean_compressed_size_bytes += double(rec.compressed_size_bytes);
    s.mean_compression_ratio += rec.compression_ratio;
    s.mean_time_seconds += rec.time_seconds;
  }
  if (by_tag.empty())
    fail(ErrorKind::kEmptyInput, "no successful records to summarize");
  std::vector<PredictorSummary> out;
  out.reserve(by_tag.size());
  for (auto& [tag, s] : by_tag) {
    s.mean_compressed_size_bytes /= double(s.count);
    s.mean_compression_ratio /= double(s.count);
    s.mean_time_seconds /= double(s.count);
    out.push_back(s);
  }
  return out;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const BenchRecord& r : records) {
    if (!r.ok) continue;
    out << csv_escape(r.filename) << ',' << r.width << ',' << r.height << ','
        << r.original_size_bytes << ',' << r.compressed_size_bytes << ','
        << fixed6(r.time_seconds) << ',' << fixed6(r.percent_of_original)
        << ',' << fixed6(r.compression_ratio) << ','
        << csv_escape(r.predictor) << "\n";
  }
}

void write_csv_file(const std::vector<BenchRecord>& records,
                    const std::filesystem::path& path) {
  // Binary mode keeps LF line endings on every platform.
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  write_csv(records, out);
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

namespace {

// Splits one CSV line into fields, honoring RFC-4180 quoting. Embedded
// newlines inside quoted fields are not supported (the writer never emits
// them for this schema's fields).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) fail(ErrorKind::kBadArgument, "malformed CSV: unbalanced quote");
  fields.push_back(std::move(cur));
  return fields;
}

uint64_t parse_u64_field(const std::string& s, const char* name) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kBadArgument,
         std::string("malformed CSV: bad ") + name + " value '" + s + "'");
  }
}

double parse_double_field(const std::string& s, const char* name) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kBadArgument,
         std::string("malformed CSV: bad ") + name + " value '" + s + "'");
  }
}

}  // namespace

std::vector<BenchRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::kBadArgument, "malformed CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    fail(ErrorKind::kBadArgument, "malformed CSV: unexpected header row");

  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 9)
      fail(ErrorKind::kBadArgument, "malformed CSV: expected 9 fields, got " +
                                        std::to_string(f.size()));
    BenchRecord rec;
    rec.filename = f[0];
    rec.width = uint32_t(parse_u64_field(f[1], "width"));
    rec.height = uint32_t(parse_u64_field(f[2], "height"));
    rec.original_size_bytes = parse_u64_field(f[3], "original_size_bytes");
    rec.compressed_size_bytes = parse_u64_field(f[4], "compressed_size_bytes");
    rec.time_seconds = parse_double_field(f[5], "time_seconds");
    rec.percent_of_original = parse_double_field(f[6], "percent_of_original");
    rec.compression_ratio = parse_double_field(f[7], "compression_ratio");
    rec.predictor = f[8];
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<BenchRecord> parse_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return parse_csv(in);
}

double record_metric(const BenchRecord& record, const std::string& metric) {
  if (metric == "compression_ratio") return record.compression_ratio;
  if (metric == "time_seconds") return record.time_seconds;
  fail(ErrorKind::kBadArgument, "unknown metric '" + metric +
                                    "' (expected compression_ratio or "
                                    "time_seconds)");
}

}  // namespace gradpix
