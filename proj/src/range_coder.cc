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

#include "gradpix/range_coder.h"

#include <algorithm>

#include "gradpix/error.h"

namespace gradpix {

// The shared renormalization condition. Emits/consumes a byte while either
// the top byte of [low, low + range) is settled, or the range has shrunk
// below kRangeBottom -- in which case the range is first clipped to the next
// kRangeBottom boundary above low so no carry can ever propagate.
#define GRADPIX_RC_NORM_CONDITION()                               \
  ((low_ ^ (low_ + range_)) < kRangeTop ||                        \
   (range_ < kRangeBottom &&                                      \
    ((range_ = (0u - low_) & (kRangeBottom - 1)), true)))

void RangeEncoder::normalize() {
  while (GRADPIX_RC_NORM_CONDITION()) {
    out_.push_back(uint8_t(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::encode(uint32_t cum_freq, uint32_t freq,
                          uint32_t total_freq) {
  const uint32_t r = range_ / total_freq;
  low_ += r * cum_freq;
  range_ = r * freq;
  normalize();
}

void RangeEncoder::finish() {
  if (finished_) fail(ErrorKind::kBadArgument, "range encoder already finished");
  finished_ = true;
  for (int i = 0; i < 4; ++i) {
    out_.push_back(uint8_t(low_ >> 24));
    low_ <<= 8;
  }
}

RangeDecoder::RangeDecoder(const uint8_t* data, size_t size)
    : low_(0), range_(0xffffffffu), code_(0), data_(data), size_(size),
      pos_(0) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ >= size_)
    fail(ErrorKind::kTruncated, "compressed stream ended early");
  return data_[pos_++];
}

void RangeDecoder::normalize() {
  while (GRADPIX_RC_NORM_CONDITION()) {
    code_ = (code_ << 8) | next_byte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

#undef GRADPIX_RC_NORM_CONDITION

uint32_t RangeDecoder::decode_freq(uint32_t total_freq) {
  range_ /= total_freq;
  const uint32_t v = (code_ - low_) / range_;
  // A valid stream never lands in the slack above the last symbol interval.
  if (v >= total_freq)
    fail(ErrorKind::kCorruptStream, "range decoder desynchronized");
  return v;
}

void RangeDecoder::decode_update(uint32_t cum_freq, uint32_t freq) {
  low_ += range_ * cum_freq;
  range_ *= freq;
  normalize();
}

SymbolModel::SymbolModel(uint32_t num_symbols)
    : n_(num_symbols), total_(num_symbols), tree_(size_t(num_symbols) + 1, 0) {
  if (num_symbols < 1 || num_symbols > kMaxTotalFrequency)
    fail(ErrorKind::kBadArgument, "symbol model alphabet size out of range");
  // All-ones counts: a Fenwick node covering k leaves holds the value k.
  for (uint32_t i = 1; i <= n_; ++i) tree_[i] = i & (0u - i);
}

uint32_t SymbolModel::cumulative_below(uint32_t symbol) const {
  uint32_t sum = 0;
  for (uint32_t i = symbol; i > 0; i -= i & (0u - i)) sum += tree_[i];
  return sum;
}

uint32_t SymbolModel::frequency(uint32_t symbol) const {
  return cumulative_below(symbol + 1) - cumulative_below(symbol);
}

uint32_t SymbolModel::find_symbol(uint32_t target, uint32_t* cum_below) const {
  uint32_t idx = 0;
  uint32_t rem = target;
  uint32_t mask = 1;
  while ((mask << 1) <= n_) mask <<= 1;
  for (; mask != 0; mask >>= 1) {
    const uint32_t next = idx + mask;
    if (next <= n_ && tree_[next] <= rem) {
      idx = next;
      rem -= tree_[next];
    }
  }
  *cum_below = target - rem;
  return idx;
}

void SymbolModel::encode(RangeEncoder& rc, uint32_t symbol) {
  if (symbol >= n_)
    fail(ErrorKind::kBadArgument, "symbol out of model alphabet");
  rc.encode(cumulative_below(symbol), frequency(symbol), total_);
  update(symbol);
}

uint32_t SymbolModel::decode(RangeDecoder& rc) {
  const uint32_t target = rc.decode_freq(total_);
  uint32_t cum = 0;
  const uint32_t symbol = find_symbol(target, &cum);
  rc.decode_update(cum, frequency(symbol));
  update(symbol);
  return symbol;
}

void SymbolModel::update(uint32_t symbol) {
  for (uint32_t i = symbol + 1; i <= n_; i += i & (0u - i))
    tree_[i] += kModelIncrement;
  total_ += kModelIncrement;
  if (total_ > kMaxTotalFrequency) rescale();
}

void SymbolModel::rescale() {
  std::vector<uint32_t> counts(n_);
  for (uint32_t s = 0; s < n_; ++s) counts[s] = frequency(s);
  std::fill(tree_.begin(), tree_.end(), 0u);
  total_ = 0;
  for (uint32_t s = 0; s < n_; ++s) {
    counts[s] = (counts[s] + 1) >> 1;  // halve, rounding up: stays >= 1
    total_ += counts[s];
  }
  // Linear-time Fenwick rebuild: push each node's sum into its parent.
  for (uint32_t i = 1; i <= n_; ++i) {
    tree_[i] += counts[i - 1];
    const uint32_t parent = i + (i & (0u - i));
    if (parent <= n_) tree_[parent] += tree_[i];
  }
}

}  // namespace gradpix
