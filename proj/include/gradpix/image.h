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

#ifndef GRADPIX_IMAGE_H_
#define GRADPIX_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace gradpix {

// Decoded pixel grid; the unit of compression. Samples are stored
// channel-planar: the whole plane of channel 0, then channel 1, ...
// Each plane is row-major. 8-bit values also live in uint16_t slots;
// bit_depth governs the valid range.
struct RasterImage {
  uint32_t width = 0;
  uint32_t height = 0;
  uint8_t channels = 1;   // 1 or 3
  uint8_t bit_depth = 8;  // 8 or 16
  std::vector<uint16_t> samples;

  uint16_t max_value() const { return bit_depth == 8 ? 255 : 65535; }
  size_t plane_size() const { return size_t(width) * height; }
  size_t sample_count() const { return plane_size() * channels; }

  const uint16_t* plane(int c) const { return samples.data() + plane_size() * c; }
  uint16_t* plane(int c) { return samples.data() + plane_size() * c; }

  uint16_t at(int c, uint32_t x, uint32_t y) const {
    return plane(c)[size_t(y) * width + x];
  }
  void set(int c, uint32_t x, uint32_t y, uint16_t v) {
    plane(c)[size_t(y) * width + x] = v;
  }

  // Throws Error(kBadArgument) if any structural invariant is violated.
  void validate() const;

  bool operator==(const RasterImage&) const = default;
};

// Gaussian noise parameters. Variance is expressed on the normalized [0,1]
// intensity scale, so the same spec perturbs 8- and 16-bit images equally.
struct NoiseSpec {
  double variance = 0.0;
  uint64_t seed = 0;
};

enum class SyntheticKind {
  kFlatEdges,     // random axis-aligned rectangles on a constant background
  kRamp,          // horizontal linear gradient
  kUniformNoise,  // i.i.d. uniform samples
};

const char* synthetic_tag(SyntheticKind kind);
std::optional<SyntheticKind> synthetic_from_tag(std::string_view tag);

// PNG I/O, 8/16-bit grayscale and truecolor only. Palette, alpha, and
// interlaced files are rejected with Error(kUnsupportedPng) naming the
// offending feature.
RasterImage load_png(const std::filesystem::path& path);
void save_png(const RasterImage& img, const std::filesystem::path& path);

// Adds per-sample Gaussian noise: out = clamp(round(x + n*M), 0, M) with
// n ~ N(0, sqrt(variance)) and M the sample maximum. Deterministic per
// (img, spec); all randomness comes from spec.seed.
RasterImage add_gaussian_noise(const RasterImage& img, const NoiseSpec& spec);

// Deterministic synthetic test images. flat_edges draws 4..32 rectangles
// of uniform color; see make_flat_edges for explicit rectangle bounds.
RasterImage generate_synthetic(SyntheticKind kind, uint32_t width,
                               uint32_t height, uint64_t seed,
                               uint8_t channels = 1, uint8_t bit_depth = 8);

RasterImage make_flat_edges(uint32_t width, uint32_t height, uint8_t channels,
                            uint8_t bit_depth, uint64_t seed,
                            uint32_t min_rects, uint32_t max_rects);

}  // namespace gradpix

#endif  // GRADPIX_IMAGE_H_
