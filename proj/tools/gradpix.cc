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

// gradpix command-line tool: encode/decode single images, run the parallel
// benchmark, derive noisy/synthetic corpora and plot benchmark CSVs.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. The last stdout
// line of every successful subcommand is machine parseable (space-separated
// key=value pairs).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradpix/bench.h"
#include "gradpix/boxplot.h"
#include "gradpix/codec.h"
#include "gradpix/error.h"
#include "gradpix/image.h"
#include "gradpix/predictors.h"

namespace {

namespace fs = std::filesystem;

std::vector<std::string> all_predictor_tags() {
  std::vector<std::string> tags;
  for (gradpix::Predictor p : gradpix::kAllPredictors)
    tags.push_back(gradpix::predictor_tag(p));
  return tags;
}

int cmd_encode(const std::string& input, const std::string& output,
               const std::string& tag, int ged_threshold) {
  const gradpix::PredictorKind kind{*gradpix::predictor_from_tag(tag),
                                    int16_t(ged_threshold)};
  const gradpix::RasterImage img = gradpix::load_png(input);
  const auto original = (unsigned long long)fs::file_size(input);
  const std::vector<uint8_t> container = gradpix::encode_image(img, kind);
  gradpix::write_file(output, container);

  const double percent = 100.0 * double(container.size()) / double(original);
  const double ratio = double(original) / double(container.size());
  std::printf("original:   %llu bytes (%s)\n", original, input.c_str());
  std::printf("compressed: %zu bytes (%s)\n", container.size(), output.c_str());
  std::printf("ratio:      %.6f (%.6f%% of original)\n", ratio, percent);
  std::printf(
      "original_bytes=%llu compressed_bytes=%zu ratio=%.6f "
      "percent_of_original=%.6f predictor=%s\n",
      original, container.size(), ratio, percent, tag.c_str());
  return 0;
}

int cmd_decode(const std::string& input, const std::string& output) {
  const std::vector<uint8_t> container = gradpix::read_file(input);
  gradpix::ContainerHeader header;
  const gradpix::RasterImage img = gradpix::decode_image(container, &header);
  gradpix::save_png(img, output);
  std::printf("decoded %u x %u, %d channel(s), %d-bit -> %s\n", img.width,
              img.height, int(img.channels), int(img.bit_depth),
              output.c_str());
  std::printf(
      "width=%u height=%u channels=%d bit_depth=%d predictor=%s "
      "ged_threshold=%d\n",
      img.width, img.height, int(img.channels), int(img.bit_depth),
      gradpix::predictor_tag(header.kind.variant),
      int(header.kind.ged_threshold));
  return 0;
}

int cmd_bench(const gradpix::BenchConfig& cfg, size_t predictor_count) {
  const std::vector<gradpix::BenchRecord> records = gradpix::run_bench(cfg);
  size_t failed = 0;
  for (const gradpix::BenchRecord& r : records)
    if (!r.ok) ++failed;

  const auto summaries = gradpix::summarize(records);
  std::printf("%-10s %7s %18s %12s %12s\n", "predictor", "images",
              "mean_bytes", "mean_ratio", "mean_time_s");
  for (const gradpix::PredictorSummary& s : summaries)
    std::printf("%-10s %7zu %18.1f %12.6f %12.6f\n", s.predictor.c_str(),
                s.count, s.mean_compressed_size_bytes, s.mean_compression_ratio,
                s.mean_time_seconds);

  std::printf("images=%zu predictors=%zu records=%zu failed=%zu\n",
              records.size() / predictor_count, predictor_count,
              records.size(), failed);
  return 0;
}

int cmd_noise(const std::string& in_dir, const std::string& out_dir,
              double variance, uint64_t seed) {
  const std::vector<fs::path> inputs = gradpix::list_png_files(in_dir);
  if (inputs.empty())
    gradpix::fail(gradpix::ErrorKind::kEmptyInput,
                  "no PNG files in " + in_dir);
  fs::create_directories(out_dir);
  // Image i (in sorted filename order) uses seed + i, so a corpus is
  // reproducible from the base seed alone.
  for (size_t i = 0; i < inputs.size(); ++i) {
    const gradpix::RasterImage img = gradpix::load_png(inputs[i]);
    const gradpix::RasterImage noisy =
        gradpix::add_gaussian_noise(img, {variance, seed + i});
    gradpix::save_png(noisy, fs::path(out_dir) / inputs[i].filename());
  }
  std::printf("wrote %zu noisy image(s) to %s\n", inputs.size(),
              out_dir.c_str());
  std::printf("images=%zu variance=%.6f seed=%llu\n", inputs.size(), variance,
              (unsigned long long)seed);
  return 0;
}

int cmd_generate(const std::string& kind_tag, unsigned count, unsigned width,
                 unsigned height, unsigned bit_depth, unsigned channels,
                 uint64_t seed, const std::string& out_dir) {
  const gradpix::SyntheticKind kind = *gradpix::synthetic_from_tag(kind_tag);
  fs::create_directories(out_dir);
  for (unsigned i = 0; i < count; ++i) {
    const gradpix::RasterImage img = gradpix::generate_synthetic(
        kind, width, height, seed + i, uint8_t(channels), uint8_t(bit_depth));
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04u.png", kind_tag.c_str(), i);
    gradpix::save_png(img, fs::path(out_dir) / name);
  }
  std::printf("wrote %u %s image(s) to %s\n", count, kind_tag.c_str(),
              out_dir.c_str());
  std::printf("images=%u kind=%s\n", count, kind_tag.c_str());
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& out,
             const std::string& metric) {
  const size_t groups = gradpix::plot_boxplot(csv, out, metric);
  std::printf("wrote boxplot of %s (%zu group(s)) to %s\n", metric.c_str(),
              groups, out.c_str());
  std::printf("groups=%zu metric=%s\n", groups, metric.c_str());
  return 0;
}

int cmd_verify(const std::string& container_path,
               const std::string& reference_png) {
  const std::vector<uint8_t> container = gradpix::read_file(container_path);
  const gradpix::RasterImage decoded = gradpix::decode_image(container);
  const gradpix::RasterImage reference = gradpix::load_png(reference_png);
  const bool match = decoded == reference;
  std::printf("%s\n", match ? "MATCH" : "MISMATCH");
  std::printf("match=%d\n", match ? 1 : 0);
  return match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gradpix: lossless predictive image codec and benchmark harness"};
  app.require_subcommand(1);
  const std::vector<std::string> tags = all_predictor_tags();

  // encode
  std::string enc_in, enc_out, enc_pred = "med";
  int enc_thresh = gradpix::kDefaultGedThreshold;
  CLI::App* enc = app.add_subcommand(
      "encode", "Compress a PNG (8/16-bit gray or RGB) into a .gpx container");
  enc->add_option("input", enc_in, "source PNG")->required();
  enc->add_option("output", enc_out, "destination container")->required();
  enc->add_option("--predictor", enc_pred,
                  "predictor tag (default: med)")
      ->check(CLI::IsMember(tags));
  enc->add_option("--ged-threshold", enc_thresh,
                  "GED gradient threshold (default: 8)")
      ->check(CLI::Range(-32768, 32767));

  // decode
  std::string dec_in, dec_out;
  CLI::App* dec =
      app.add_subcommand("decode", "Decompress a .gpx container into a PNG");
  dec->add_option("input", dec_in, "source container")->required();
  dec->add_option("output", dec_out, "destination PNG")->required();

  // bench
  gradpix::BenchConfig bench_cfg;
  std::string bench_in, bench_out, bench_csv;
  std::vector<std::string> bench_preds;
  int bench_thresh = gradpix::kDefaultGedThreshold;
  bool bench_no_verify = false;
  CLI::App* bench = app.add_subcommand(
      "bench",
      "Compress every PNG in a directory under each selected predictor on a "
      "worker pool and report per-pair metrics. Sizes and ratios compare the "
      "container against the PNG file size on disk.");
  bench->add_option("--in", bench_in, "input directory of PNGs")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--out", bench_out,
                    "directory for <image>.<predictor>.gpx containers "
                    "(omit to skip writing containers)");
  bench->add_option("--csv", bench_csv,
                    "CSV report path (omit to skip the report)");
  bench->add_option("--workers", bench_cfg.workers,
                    "worker thread count (default: 10)")
      ->check(CLI::PositiveNumber)
      ->envname("GRADPIX_WORKERS");
  bench->add_option("--predictors", bench_preds,
                    "comma-separated predictor tags (default: med,ged,gap)")
      ->delimiter(',')
      ->check(CLI::IsMember(tags));
  bench->add_option("--ged-threshold", bench_thresh,
                    "GED gradient threshold (default: 8)")
      ->check(CLI::Range(-32768, 32767));
  bench->add_flag("--no-verify", bench_no_verify,
                  "skip decode-and-compare round-trip verification");

  // noise
  std::string noise_in, noise_out;
  double noise_variance = 0.0;
  uint64_t noise_seed = 0;
  CLI::App* noise = app.add_subcommand(
      "noise",
      "Write Gaussian-noised copies of every PNG in a directory. Noise is "
      "N(0, variance) on a 0..1 sample scale; image i (sorted by name) uses "
      "seed+i.");
  noise->add_option("--in", noise_in, "input directory of PNGs")
      ->required()
      ->check(CLI::ExistingDirectory);
  noise->add_option("--out", noise_out, "output directory")->required();
  noise->add_option("--variance", noise_variance,
                    "noise variance on the normalized 0..1 scale (required)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  noise->add_option("--seed", noise_seed, "base RNG seed (default: 0)");

  // generate
  std::string gen_kind, gen_out;
  unsigned gen_count = 1, gen_width = 512, gen_height = 512, gen_depth = 8,
           gen_channels = 1;
  uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand(
      "generate",
      "Write synthetic PNGs (<kind>_NNNN.png); image i uses seed+i.");
  gen->add_option("--kind", gen_kind,
                  "flat_edges (random rectangles), ramp (horizontal "
                  "gradient) or uniform_noise")
      ->required()
      ->check(CLI::IsMember({"flat_edges", "ramp", "uniform_noise"}));
  gen->add_option("--count", gen_count, "number of images (default: 1)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--width", gen_width, "image width (default: 512)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_height, "image height (default: 512)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--bit-depth", gen_depth, "8 or 16 (default: 8)")
      ->check(CLI::IsMember({8, 16}));
  gen->add_option("--channels", gen_channels, "1 or 3 (default: 1)")
      ->check(CLI::IsMember({1, 3}));
  gen->add_option("--seed", gen_seed, "base RNG seed (default: 0)");
  gen->add_option("--out", gen_out, "output directory")->required();

  // plot
  std::string plot_csv, plot_out, plot_metric = "compression_ratio";
  CLI::App* plot = app.add_subcommand(
      "plot", "Render a per-predictor boxplot SVG from a bench CSV");
  plot->add_option("--csv", plot_csv, "bench CSV path")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--metric", plot_metric,
                   "compression_ratio or time_seconds "
                   "(default: compression_ratio)")
      ->check(CLI::IsMember({"compression_ratio", "time_seconds"}));

  // verify
  std::string ver_container, ver_png;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Decode a container and bit-compare it against a reference PNG; prints "
      "MATCH or MISMATCH");
  verify->add_option("container", ver_container, "container to decode")
      ->required();
  verify->add_option("reference", ver_png, "reference PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (enc->parsed()) return cmd_encode(enc_in, enc_out, enc_pred, enc_thresh);
    if (dec->parsed()) return cmd_decode(dec_in, dec_out);
    if (bench->parsed()) {
      bench_cfg.input_dir = bench_in;
      bench_cfg.output_dir = bench_out;
      bench_cfg.csv_path = bench_csv;
      bench_cfg.verify = !bench_no_verify;
      if (bench_preds.empty()) bench_preds = {"med", "ged", "gap"};
      for (const std::string& tag : bench_preds)
        bench_cfg.predictors.push_back(
            {*gradpix::predictor_from_tag(tag), int16_t(bench_thresh)});
      return cmd_bench(bench_cfg, bench_cfg.predictors.size());
    }
    if (noise->parsed())
      return cmd_noise(noise_in, noise_out, noise_variance, noise_seed);
    if (gen->parsed())
      return cmd_generate(gen_kind, gen_count, gen_width, gen_height,
                          gen_depth, gen_channels, gen_seed, gen_out);
    if (plot->parsed()) return cmd_plot(plot_csv, plot_out, plot_metric);
    if (verify->parsed()) return cmd_verify(ver_container, ver_png);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
