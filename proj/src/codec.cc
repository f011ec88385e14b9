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

#include "gradpix/codec.h"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "gradpix/error.h"
#include "gradpix/range_coder.h"

namespace gradpix {

namespace {

void put_u32_le(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 24));
}

uint32_t get_u32_le(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

uint32_t depth_mask(uint8_t bit_depth) {
  return bit_depth == 16 ? 0xffffu : 0xffu;
}

}  // namespace

uint16_t residual(uint16_t actual, uint16_t predicted, uint8_t bit_depth) {
  return uint16_t((uint32_t(actual) - predicted) & depth_mask(bit_depth));
}

uint16_t reconstruct(uint16_t r, uint16_t predicted, uint8_t bit_depth) {
  return uint16_t((uint32_t(predicted) + r) & depth_mask(bit_depth));
}

uint16_t fold_residual(uint16_t r, uint8_t bit_depth) {
  const int32_t half = 1 << (bit_depth - 1);
  const int32_t v = r < half ? r : int32_t(r) - (half << 1);
  return uint16_t(v >= 0 ? 2 * v : -2 * v - 1);
}

uint16_t unfold_residual(uint16_t code, uint8_t bit_depth) {
  const int32_t v = (code & 1) ? -int32_t((code + 1) >> 1) : int32_t(code >> 1);
  return uint16_t(uint32_t(v) & depth_mask(bit_depth));
}

uint32_t context_gradient(const CausalNeighborhood& n) {
  auto ad = [](int32_t a, int32_t b) { return uint32_t(a < b ? b - a : a - b); };
  return ad(n.w, n.nw) + ad(n.nw, n.n) + ad(n.n, n.ne);
}

uint32_t context_bucket(uint32_t gradient) {
  static constexpr uint32_t kThresholds[] = {0, 1, 2, 4, 8, 16, 32, 64};
  uint32_t i = 0;
  for (; i < 8; ++i)
    if (gradient <= kThresholds[i]) return i;
  return 8;
}

uint32_t crc32_of_samples(const RasterImage& img) {
  uLong crc = crc32(0L, Z_NULL, 0);
  uint8_t buf[1 << 14];
  size_t fill = 0;
  const bool wide = img.bit_depth == 16;
  for (uint16_t s : img.samples) {
    buf[fill++] = uint8_t(s & 0xff);
    if (wide) buf[fill++] = uint8_t(s >> 8);
    if (fill + 2 > sizeof(buf)) {
      crc = crc32(crc, buf, uInt(fill));
      fill = 0;
    }
  }
  if (fill > 0) crc = crc32(crc, buf, uInt(fill));
  return uint32_t(crc);
}

// Symbol models for one channel: one bank of 9 gradient-bucket contexts for
// 8-bit samples; 16-bit folded codes are split into high and low bytes with
// a second bank for the low byte, so every model keeps the 256-symbol
// alphabet and its adaptation dynamics.
namespace {

class ChannelModels {
 public:
  explicit ChannelModels(uint8_t bit_depth) : wide_(bit_depth == 16) {
    const uint32_t banks = wide_ ? 2 : 1;
    models_.reserve(size_t(kNumContexts) * banks);
    for (uint32_t i = 0; i < kNumContexts * banks; ++i) models_.emplace_back(256);
  }

  void encode(RangeEncoder& rc, uint32_t ctx, uint16_t code) {
    if (wide_) {
      models_[ctx].encode(rc, code >> 8);
      models_[kNumContexts + ctx].encode(rc, code & 0xff);
    } else {
      models_[ctx].encode(rc, code);
    }
  }

  uint16_t decode(RangeDecoder& rc, uint32_t ctx) {
    if (wide_) {
      const uint32_t hi = models_[ctx].decode(rc);
      const uint32_t lo = models_[kNumContexts + ctx].decode(rc);
      return uint16_t(hi << 8 | lo);
    }
    return uint16_t(models_[ctx].decode(rc));
  }

 private:
  bool wide_;
  std::vector<SymbolModel> models_;
};

}  // namespace

std::vector<uint8_t> encode_image(const RasterImage& img,
                                  const PredictorKind& kind) {
  img.validate();

  std::vector<uint8_t> out;
  out.reserve(kContainerHeaderSize + img.sample_count() / 2);
  out.insert(out.end(), kContainerMagic, kContainerMagic + 4);
  out.push_back(kContainerVersion);
  put_u32_le(out, img.width);
  put_u32_le(out, img.height);
  out.push_back(img.channels);
  out.push_back(img.bit_depth);
  out.push_back(uint8_t(kind.variant));
  const uint16_t thresh_bits = uint16_t(kind.ged_threshold);
  out.push_back(uint8_t(thresh_bits & 0xff));
  out.push_back(uint8_t(thresh_bits >> 8));
  put_u32_le(out, crc32_of_samples(img));

  const uint16_t maxv = img.max_value();
  for (int c = 0; c < img.channels; ++c) {
    ChannelModels models(img.bit_depth);
    RangeEncoder rc;
    const uint16_t* plane = img.plane(c);
    for (uint32_t y = 0; y < img.height; ++y) {
      for (uint32_t x = 0; x < img.width; ++x) {
        const CausalNeighborhood nb =
            neighborhood_in_plane(plane, img.width, img.height, x, y);
        const uint16_t actual = plane[size_t(y) * img.width + x];
        const uint16_t pred = predict(kind, nb, maxv);
        const uint16_t code =
            fold_residual(residual(actual, pred, img.bit_depth), img.bit_depth);
        models.encode(rc, context_of(nb), code);
      }
    }
    rc.finish();
    const std::vector<uint8_t>& payload = rc.bytes();
    put_u32_le(out, uint32_t(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

ContainerHeader parse_container_header(const uint8_t* data, size_t size) {
  if (size == 0) fail(ErrorKind::kEmptyInput, "empty input");
  if (size < 4) fail(ErrorKind::kTruncated, "container shorter than magic");
  if (std::memcmp(data, kContainerMagic, 4) != 0)
    fail(ErrorKind::kBadMagic, "bad magic (not a gradpix container)");
  if (size < kContainerHeaderSize)
    fail(ErrorKind::kTruncated, "container header truncated");
  if (data[4] != kContainerVersion)
    fail(ErrorKind::kBadVersion,
         "unsupported container version " + std::to_string(data[4]));

  ContainerHeader h;
  h.width = get_u32_le(data + 5);
  h.height = get_u32_le(data + 9);
  h.channels = data[13];
  h.bit_depth = data[14];
  const uint8_t predictor_id = data[15];
  h.kind.ged_threshold = int16_t(uint16_t(data[16]) | uint16_t(data[17]) << 8);
  h.crc32 = get_u32_le(data + 18);

  if (h.width < 1 || h.height < 1)
    fail(ErrorKind::kBadHeader, "header has zero image dimension");
  if (h.channels != 1 && h.channels != 3)
    fail(ErrorKind::kBadHeader,
         "header channels must be 1 or 3, got " + std::to_string(h.channels));
  if (h.bit_depth != 8 && h.bit_depth != 16)
    fail(ErrorKind::kBadHeader, "header bit depth must be 8 or 16, got " +
                                    std::to_string(h.bit_depth));
  if (predictor_id > uint8_t(Predictor::kGap))
    fail(ErrorKind::kBadHeader,
         "unknown predictor id " + std::to_string(predictor_id));
  h.kind.variant = Predictor(predictor_id);
  if (uint64_t(h.width) * h.height * h.channels > kMaxDecodedSamples)
    fail(ErrorKind::kBadHeader, "header describes an unreasonably large image");
  return h;
}

RasterImage decode_image(const uint8_t* data, size_t size,
                         ContainerHeader* header_out) {
  const ContainerHeader h = parse_container_header(data, size);
  if (header_out) *header_out = h;

  RasterImage img;
  img.width = h.width;
  img.height = h.height;
  img.channels = h.channels;
  img.bit_depth = h.bit_depth;
  img.samples.assign(img.sample_count(), 0);

  const uint16_t maxv = img.max_value();
  size_t offset = kContainerHeaderSize;
  for (int c = 0; c < img.channels; ++c) {
    if (offset + 4 > size)
      fail(ErrorKind::kTruncated, "channel payload length truncated");
    const uint32_t payload_len = get_u32_le(data + offset);
    offset += 4;
    if (offset + payload_len > size)
      fail(ErrorKind::kTruncated, "channel payload truncated");

    ChannelModels models(img.bit_depth);
    RangeDecoder rc(data + offset, payload_len);
    uint16_t* plane = img.plane(c);
    for (uint32_t y = 0; y < img.height; ++y) {
      for (uint32_t x = 0; x < img.width; ++x) {
        // The neighborhood reads already-reconstructed samples, which by
        // losslessness equal the ones the encoder saw.
        const CausalNeighborhood nb =
            neighborhood_in_plane(plane, img.width, img.height, x, y);
        const uint16_t pred = predict(h.kind, nb, maxv);
        const uint16_t code = models.decode(rc, context_of(nb));
        plane[size_t(y) * img.width + x] =
            reconstruct(unfold_residual(code, img.bit_depth), pred,
                        img.bit_depth);
      }
    }
    if (rc.bytes_consumed() != payload_len)
      fail(ErrorKind::kCorruptStream,
           "channel payload has unread trailing bytes");
    offset += payload_len;
  }
  if (offset != size)
    fail(ErrorKind::kCorruptStream, "trailing data after last channel");

  if (crc32_of_samples(img) != h.crc32)
    fail(ErrorKind::kChecksumMismatch,
         "decoded samples do not match stored checksum");
  return img;
}

RasterImage decode_image(const std::vector<uint8_t>& container,
                         ContainerHeader* header_out) {
  return decode_image(container.data(), container.size(), header_out);
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>()};
  if (in.bad()) fail(ErrorKind::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace gradpix
