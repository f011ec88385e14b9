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

#ifndef GRADPIX_CODEC_H_
#define GRADPIX_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gradpix/image.h"
#include "gradpix/predictors.h"

namespace gradpix {

// Container layout (all integers little-endian):
//
//   offset  size  field
//        0     4  magic "GPX1"
//        4     1  format version (1)
//        5     4  width
//        9     4  height
//       13     1  channels (1 or 3)
//       14     1  bit depth (8 or 16)
//       15     1  predictor id (Predictor enum value)
//       16     2  GED threshold (int16)
//       18     4  CRC-32 of the raw samples (planar order; 16-bit samples
//                 as little-endian byte pairs)
//       22     -  per channel: payload length (uint32) + payload bytes
//
// Each channel payload is an independent range-coded stream with its own
// freshly initialized context models.
inline constexpr uint8_t kContainerMagic[4] = {'G', 'P', 'X', '1'};
inline constexpr uint8_t kContainerVersion = 1;
inline constexpr size_t kContainerHeaderSize = 22;

// Refuse to allocate for absurd headers (2^28 samples = 512 MiB of u16).
inline constexpr uint64_t kMaxDecodedSamples = uint64_t(1) << 28;

// Number of gradient-activity buckets used for context modeling.
inline constexpr uint32_t kNumContexts = 9;

struct ContainerHeader {
  uint32_t width = 0;
  uint32_t height = 0;
  uint8_t channels = 0;
  uint8_t bit_depth = 0;
  PredictorKind kind;
  uint32_t crc32 = 0;
};

// --- Residual mapping -------------------------------------------------------

// Wrapped difference (actual - predicted) mod 2^bit_depth. Wrapping rather
// than clamping keeps the mapping bijective for any predictor output.
uint16_t residual(uint16_t actual, uint16_t predicted, uint8_t bit_depth);

// Inverse: (predicted + r) mod 2^bit_depth.
uint16_t reconstruct(uint16_t r, uint16_t predicted, uint8_t bit_depth);

// Zigzag fold: interpret r as the signed value v in [-2^(b-1), 2^(b-1)) and
// map 0, -1, 1, -2, 2, ... onto 0, 1, 2, 3, 4, ... so that small error
// magnitudes become small codes. Bijective on [0, 2^b).
uint16_t fold_residual(uint16_t r, uint8_t bit_depth);
uint16_t unfold_residual(uint16_t code, uint8_t bit_depth);

// --- Context modeling -------------------------------------------------------

// Local gradient activity |W-NW| + |NW-N| + |N-NE|.
uint32_t context_gradient(const CausalNeighborhood& n);

// Buckets the activity through thresholds [0, 1, 2, 4, 8, 16, 32, 64] into
// an index in {0..8}; larger gradients select later (busier) contexts.
uint32_t context_bucket(uint32_t gradient);

inline uint32_t context_of(const CausalNeighborhood& n) {
  return context_bucket(context_gradient(n));
}

// --- Codec ------------------------------------------------------------------

// CRC-32 (IEEE, zlib polynomial) of the raw samples in planar order.
uint32_t crc32_of_samples(const RasterImage& img);

// Serializes `img` losslessly; a pure function of (img, kind), so output is
// byte-identical across runs and platforms.
std::vector<uint8_t> encode_image(const RasterImage& img,
                                  const PredictorKind& kind);

// Parses and validates the fixed header only (no payload decode).
ContainerHeader parse_container_header(const uint8_t* data, size_t size);

// Full inverse of encode_image. Verifies the checksum and raises distinct
// errors for bad magic, version mismatch, malformed headers, truncation and
// stream desync; never returns a wrong image silently. If `header_out` is
// non-null it receives the parsed header.
RasterImage decode_image(const uint8_t* data, size_t size,
                         ContainerHeader* header_out = nullptr);
RasterImage decode_image(const std::vector<uint8_t>& container,
                         ContainerHeader* header_out = nullptr);

// --- Small file helpers -----------------------------------------------------

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                const std::vector<uint8_t>& bytes);

}  // namespace gradpix

#endif  // GRADPIX_CODEC_H_
