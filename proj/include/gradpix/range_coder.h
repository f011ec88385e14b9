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

#ifndef GRADPIX_RANGE_CODER_H_
#define GRADPIX_RANGE_CODER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gradpix {

// Carry-less byte-oriented range coder (Subbotin variant). The encoder keeps
// a 32-bit [low, low + range) window; whenever the top byte of the window is
// settled it is emitted, and when the range underflows below kRangeBottom the
// range is truncated so that it never straddles a carry boundary.
inline constexpr uint32_t kRangeTop = 1u << 24;
inline constexpr uint32_t kRangeBottom = 1u << 16;

// Frequency totals passed to encode()/decode_freq() must not exceed this, or
// the scaled range can collapse to zero.
inline constexpr uint32_t kMaxTotalFrequency = 1u << 16;

class RangeEncoder {
 public:
  RangeEncoder() : low_(0), range_(0xffffffffu) {}

  // Narrows the window to the [cum_freq, cum_freq + freq) slice of a total
  // of `total_freq`. Requires freq >= 1, cum_freq + freq <= total_freq and
  // total_freq <= kMaxTotalFrequency.
  void encode(uint32_t cum_freq, uint32_t freq, uint32_t total_freq);

  // Flushes the remaining window state (4 bytes). Must be called exactly
  // once, after the last encode().
  void finish();

  const std::vector<uint8_t>& bytes() const { return out_; }
  std::vector<uint8_t> take() { return std::move(out_); }

 private:
  void normalize();

  uint32_t low_;
  uint32_t range_;
  bool finished_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  // The buffer must stay alive for the decoder's lifetime. Preloads the
  // first 4 bytes of the window.
  RangeDecoder(const uint8_t* data, size_t size);

  // Returns the slice position of the next symbol, in [0, total_freq).
  // Look the symbol up in the model, then call decode_update() with its
  // interval before the next decode_freq().
  uint32_t decode_freq(uint32_t total_freq);
  void decode_update(uint32_t cum_freq, uint32_t freq);

  // Bytes read so far, including the 4-byte preload.
  size_t bytes_consumed() const { return pos_; }

 private:
  uint8_t next_byte();
  void normalize();

  uint32_t low_;
  uint32_t range_;
  uint32_t code_;
  const uint8_t* data_;
  size_t size_;
  size_t pos_;
};

// Adaptive order-0 model over a fixed symbol alphabet, backed by a Fenwick
// tree so both cumulative lookups and symbol search are O(log n).
//
// Every count starts at 1 (no symbol ever has zero probability), a coded
// symbol's count grows by kModelIncrement, and when the total would pass
// kMaxTotalFrequency every count is halved (rounding up, so counts stay
// >= 1). Encoder and decoder apply identical updates and therefore stay in
// lockstep.
inline constexpr uint32_t kModelIncrement = 32;

class SymbolModel {
 public:
  explicit SymbolModel(uint32_t num_symbols);

  uint32_t num_symbols() const { return n_; }
  uint32_t total() const { return total_; }
  uint32_t frequency(uint32_t symbol) const;
  uint32_t cumulative_below(uint32_t symbol) const;

  // Codes `symbol` (resp. the next symbol) and then adapts the counts.
  void encode(RangeEncoder& rc, uint32_t symbol);
  uint32_t decode(RangeDecoder& rc);

  // Adaptation step alone; exposed so tests can drive the model directly.
  void update(uint32_t symbol);

 private:
  // Largest symbol whose cumulative count is <= target; also returns
  // the cumulative count below that symbol.
  uint32_t find_symbol(uint32_t target, uint32_t* cum_below) const;
  void rescale();

  uint32_t n_;
  uint32_t total_;
  std::vector<uint32_t> tree_;  // 1-based Fenwick array of counts
};

}  // namespace gradpix

#endif  // GRADPIX_RANGE_CODER_H_
