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

#include "gradpix/image.h"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "gradpix/error.h"

namespace gradpix {

void RasterImage::validate() const {
  if (width < 1 || height < 1) fail(ErrorKind::kBadArgument, "image dimensions must be >= 1");
  if (channels != 1 && channels != 3) fail(ErrorKind::kBadArgument, "channels must be 1 or 3");
  if (bit_depth != 8 && bit_depth != 16) fail(ErrorKind::kBadArgument, "bit depth must be 8 or 16");
  if (samples.size() != sample_count())
    fail(ErrorKind::kBadArgument, "sample buffer size does not match width*height*channels");
  const uint16_t maxv = max_value();
  for (uint16_t s : samples)
    if (s > maxv) fail(ErrorKind::kBadArgument, "sample exceeds bit depth range");
}

const char* synthetic_tag(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kFlatEdges: return "flat_edges";
    case SyntheticKind::kRamp: return "ramp";
    case SyntheticKind::kUniformNoise: return "uniform_noise";
  }
  return "?";
}

std::optional<SyntheticKind> synthetic_from_tag(std::string_view tag) {
  if (tag == "flat_edges") return SyntheticKind::kFlatEdges;
  if (tag == "ramp") return SyntheticKind::kRamp;
  if (tag == "uniform_noise") return SyntheticKind::kUniformNoise;
  return std::nullopt;
}

namespace {

struct FileCloser {
  FILE* f = nullptr;
  ~FileCloser() { if (f) fclose(f); }
};

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error_msg;
  ~PngReadState() { if (png) png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error_msg;
  ~PngWriteState() { if (png) png_destroy_write_struct(&png, &info); }
};

void png_error_trampoline(png_structp png, png_const_charp msg) {
  auto* out = static_cast<std::string*>(png_get_error_ptr(png));
  if (out && out->empty()) *out = msg;
  longjmp(png_jmpbuf(png), 1);
}

void png_warning_sink(png_structp, png_const_charp) {}

// Draws deterministic values from mt19937_64 directly; std::*_distribution
// is not bit-stable across standard libraries.
uint64_t draw_uniform(std::mt19937_64& rng, uint64_t lo, uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

double draw_unit(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method; one state object per image so the draw sequence
// is a pure function of the seed.
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * draw_unit(rng_) - 1.0;
      v = 2.0 * draw_unit(rng_) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

RasterImage load_png(const std::filesystem::path& path) {
  FileCloser file;
  file.f = std::fopen(path.string().c_str(), "rb");
  if (!file.f) fail(ErrorKind::kIo, "cannot open " + path.string());

  PngReadState st;
  RasterImage img;
  std::vector<uint8_t> row;

  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st.error_msg,
                                  png_error_trampoline, png_warning_sink);
  if (!st.png) fail(ErrorKind::kIo, "libpng init failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) fail(ErrorKind::kIo, "libpng init failed");

  if (setjmp(png_jmpbuf(st.png)))
    fail(ErrorKind::kIo, "PNG decode failed (" + path.string() + "): " + st.error_msg);

  png_init_io(st.png, file.f);
  png_read_info(st.png, st.info);

  const png_uint_32 width = png_get_image_width(st.png, st.info);
  const png_uint_32 height = png_get_image_height(st.png, st.info);
  const int depth = png_get_bit_depth(st.png, st.info);
  const int color = png_get_color_type(st.png, st.info);
  const int interlace = png_get_interlace_type(st.png, st.info);

  if (interlace != PNG_INTERLACE_NONE)
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: interlaced image");
  if (color == PNG_COLOR_TYPE_PALETTE)
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: palette image");
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA || color == PNG_COLOR_TYPE_RGB_ALPHA)
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: alpha channel");
  if (png_get_valid(st.png, st.info, PNG_INFO_tRNS))
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: transparency (tRNS)");
  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: color type " + std::to_string(color));
  if (depth != 8 && depth != 16)
    fail(ErrorKind::kUnsupportedPng, "unsupported PNG: bit depth " + std::to_string(depth));

  img.width = width;
  img.height = height;
  img.channels = (color == PNG_COLOR_TYPE_RGB) ? 3 : 1;
  img.bit_depth = uint8_t(depth);
  img.samples.assign(img.sample_count(), 0);

  const size_t bytes_per_sample = depth == 16 ? 2 : 1;
  row.resize(size_t(width) * img.channels * bytes_per_sample);

  const size_t plane = img.plane_size();
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(st.png, row.data(), nullptr);
    // PNG rows interleave channels; 16-bit samples are big-endian.
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        const size_t off = (size_t(x) * img.channels + c) * bytes_per_sample;
        uint16_t v = depth == 16 ? uint16_t(row[off] << 8 | row[off + 1]) : row[off];
        img.samples[plane * c + size_t(y) * width + x] = v;
      }
    }
  }
  png_read_end(st.png, nullptr);
  return img;
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
  img.validate();

  FileCloser file;
  file.f = std::fopen(path.string().c_str(), "wb");
  if (!file.f) fail(ErrorKind::kIo, "cannot write " + path.string());

  PngWriteState st;
  std::vector<uint8_t> row;

  st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &st.error_msg,
                                   png_error_trampoline, png_warning_sink);
  if (!st.png) fail(ErrorKind::kIo, "libpng init failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) fail(ErrorKind::kIo, "libpng init failed");

  if (setjmp(png_jmpbuf(st.png)))
    fail(ErrorKind::kIo, "PNG encode failed (" + path.string() + "): " + st.error_msg);

  png_init_io(st.png, file.f);
  png_set_IHDR(st.png, st.info, img.width, img.height, img.bit_depth,
               img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st.png, st.info);

  const size_t bytes_per_sample = img.bit_depth == 16 ? 2 : 1;
  row.resize(size_t(img.width) * img.channels * bytes_per_sample);
  const size_t plane = img.plane_size();
  for (uint32_t y = 0; y < img.height; ++y) {
    for (uint32_t x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        const uint16_t v = img.samples[plane * c + size_t(y) * img.width + x];
        const size_t off = (size_t(x) * img.channels + c) * bytes_per_sample;
        if (img.bit_depth == 16) {
          row[off] = uint8_t(v >> 8);
          row[off + 1] = uint8_t(v & 0xff);
        } else {
          row[off] = uint8_t(v);
        }
      }
    }
    png_write_row(st.png, row.data());
  }
  png_write_end(st.png, st.info);
}

RasterImage add_gaussian_noise(const RasterImage& img, const NoiseSpec& spec) {
  img.validate();
  if (spec.variance < 0) fail(ErrorKind::kBadArgument, "noise variance must be >= 0");

  RasterImage out = img;
  if (spec.variance == 0) return out;

  const double sigma = std::sqrt(spec.variance);
  const double maxv = img.max_value();
  GaussianSource gauss(spec.seed);
  for (auto& s : out.samples) {
    const double noisy = double(s) + gauss.next() * sigma * maxv;
    const long r = std::lround(noisy);
    s = uint16_t(std::clamp<long>(r, 0, long(maxv)));
  }
  return out;
}

RasterImage make_flat_edges(uint32_t width, uint32_t height, uint8_t channels,
                            uint8_t bit_depth, uint64_t seed,
                            uint32_t min_rects, uint32_t max_rects) {
  RasterImage img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.bit_depth = bit_depth;
  img.samples.resize(img.sample_count());
  img.validate();

  std::mt19937_64 rng(seed);
  const uint64_t maxv = img.max_value();
  const size_t plane = img.plane_size();

  for (int c = 0; c < channels; ++c) {
    const uint16_t bg = uint16_t(draw_uniform(rng, 0, maxv));
    std::fill_n(img.plane(c), plane, bg);
  }

  const uint64_t count = min_rects == max_rects
                             ? min_rects
                             : draw_uniform(rng, min_rects, max_rects);
  for (uint64_t k = 0; k < count; ++k) {
    const uint32_t x0 = uint32_t(draw_uniform(rng, 0, width - 1));
    const uint32_t y0 = uint32_t(draw_uniform(rng, 0, height - 1));
    const uint32_t rw = uint32_t(draw_uniform(rng, std::max<uint32_t>(1, width / 8),
                                              std::max<uint32_t>(1, width / 2)));
    const uint32_t rh = uint32_t(draw_uniform(rng, std::max<uint32_t>(1, height / 8),
                                              std::max<uint32_t>(1, height / 2)));
    const uint32_t x1 = std::min(width, x0 + rw);
    const uint32_t y1 = std::min(height, y0 + rh);
    for (int c = 0; c < channels; ++c) {
      const uint16_t color = uint16_t(draw_uniform(rng, 0, maxv));
      uint16_t* p = img.plane(c);
      for (uint32_t y = y0; y < y1; ++y)
        for (uint32_t x = x0; x < x1; ++x) p[size_t(y) * width + x] = color;
    }
  }
  return img;
}

RasterImage generate_synthetic(SyntheticKind kind, uint32_t width,
                               uint32_t height, uint64_t seed,
                               uint8_t channels, uint8_t bit_depth) {
  if (width < 1 || height < 1)
    fail(ErrorKind::kBadArgument, "synthetic dimensions must be >= 1");
  switch (kind) {
    case SyntheticKind::kFlatEdges:
      return make_flat_edges(width, height, channels, bit_depth, seed, 4, 32);
    case SyntheticKind::kRamp: {
      RasterImage img;
      img.width = width;
      img.height = height;
      img.channels = channels;
      img.bit_depth = bit_depth;
      img.samples.resize(img.sample_count());
      const uint64_t maxv = img.max_value();
      for (int c = 0; c < channels; ++c) {
        uint16_t* p = img.plane(c);
        for (uint32_t y = 0; y < height; ++y)
          for (uint32_t x = 0; x < width; ++x)
            p[size_t(y) * width + x] =
                width == 1 ? 0 : uint16_t(uint64_t(x) * maxv / (width - 1));
      }
      return img;
    }
    case SyntheticKind::kUniformNoise: {
      RasterImage img;
      img.width = width;
      img.height = height;
      img.channels = channels;
      img.bit_depth = bit_depth;
      img.samples.resize(img.sample_count());
      std::mt19937_64 rng(seed);
      const uint64_t maxv = img.max_value();
      for (auto& s : img.samples) s = uint16_t(draw_uniform(rng, 0, maxv));
      return img;
    }
  }
  fail(ErrorKind::kBadArgument, "unknown synthetic kind");
}

}  // namespace gradpix
