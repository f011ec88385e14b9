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
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "gradpix/error.h"
#include "gradpix/range_coder.h"

using gradpix::Error;
using gradpix::ErrorKind;
using gradpix::RangeDecoder;
using gradpix::RangeEncoder;
using gradpix::SymbolModel;

TEST_CASE("empty symbol stream is the 4-byte flush") {
  RangeEncoder enc;
  enc.finish();
  CHECK(enc.bytes().size() == 4);

  // Decoding nothing from it consumes exactly the preload.
  RangeDecoder dec(enc.bytes().data(), enc.bytes().size());
  CHECK(dec.bytes_consumed() == 4);
}

TEST_CASE("finish can only be called once") {
  RangeEncoder enc;
  enc.finish();
  CHECK_THROWS_AS(enc.finish(), Error);
}

TEST_CASE("model starts uniform with all-ones counts") {
  SymbolModel m(256);
  CHECK(m.num_symbols() == 256);
  CHECK(m.total() == 256);
  for (uint32_t s = 0; s < 256; ++s) {
    CHECK(m.frequency(s) == 1);
    CHECK(m.cumulative_below(s) == s);
  }
}

TEST_CASE("model update adds the fixed increment") {
  SymbolModel m(16);
  m.update(5);
  CHECK(m.total() == 16 + 32);
  CHECK(m.frequency(5) == 33);
  CHECK(m.frequency(4) == 1);
  CHECK(m.cumulative_below(5) == 5);
  CHECK(m.cumulative_below(6) == 5 + 33);
  CHECK(m.cumulative_below(16) == m.total());
}

TEST_CASE("model total never exceeds the coder's frequency ceiling") {
  SymbolModel m(256);
  std::mt19937_64 rng(7);
  uint32_t rescales_seen = 0;
  uint32_t prev_total = m.total();
  for (int i = 0; i < 30000; ++i) {
    m.update(uint32_t(rng() % 256));
    CHECK(m.total() <= gradpix::kMaxTotalFrequency);
    if (m.total() < prev_total) ++rescales_seen;
    prev_total = m.total();
  }
  CHECK(rescales_seen > 0);
  // Counts stay positive through rescaling and cumulative stays consistent.
  uint32_t cum = 0;
  for (uint32_t s = 0; s < 256; ++s) {
    CHECK(m.frequency(s) >= 1);
    CHECK(m.cumulative_below(s) == cum);
    cum += m.frequency(s);
  }
  CHECK(cum == m.total());
}

TEST_CASE("rescale halves counts rounding up") {
  SymbolModel m(8);
  // Push one symbol until just before the ceiling, then step over it.
  while (m.total() + 32 <= gradpix::kMaxTotalFrequency) m.update(3);
  const uint32_t f3 = m.frequency(3);
  m.update(3);  // crosses the ceiling, triggering the halving
  CHECK(m.total() <= gradpix::kMaxTotalFrequency);
  CHECK(m.frequency(3) == (f3 + 32 + 1) / 2);
  for (uint32_t s = 0; s < 8; ++s) CHECK(m.frequency(s) >= 1);
}

TEST_CASE("a single repeated symbol compresses below 2 percent") {
  constexpr int kCount = 10000;
  SymbolModel enc_model(256);
  RangeEncoder enc;
  for (int i = 0; i < kCount; ++i) enc_model.encode(enc, 7);
  enc.finish();
  CHECK(enc.bytes().size() <= kCount / 50);  // <= 2% of one byte per symbol

  SymbolModel dec_model(256);
  RangeDecoder dec(enc.bytes().data(), enc.bytes().size());
  for (int i = 0; i < kCount; ++i) REQUIRE(dec_model.decode(dec) == 7);
  CHECK(dec.bytes_consumed() == enc.bytes().size());
}

TEST_CASE("encoder and decoder models evolve in lockstep") {
  std::mt19937_64 rng(42);
  constexpr int kCount = 5000;
  std::vector<uint32_t> symbols(kCount);
  for (auto& s : symbols) s = uint32_t(rng() % 64);

  SymbolModel enc_model(64);
  RangeEncoder enc;
  for (uint32_t s : symbols) enc_model.encode(enc, s);
  enc.finish();

  // Replay decoding one symbol at a time against a shadow model driven by
  // the known sequence; totals must agree after every step.
  SymbolModel dec_model(64);
  SymbolModel shadow(64);
  RangeDecoder dec(enc.bytes().data(), enc.bytes().size());
  for (int i = 0; i < kCount; ++i) {
    REQUIRE(dec_model.decode(dec) == symbols[i]);
    shadow.update(symbols[i]);
    REQUIRE(dec_model.total() == shadow.total());
    if (i % 250 == 0) {
      for (uint32_t s = 0; s < 64; ++s)
        REQUIRE(dec_model.frequency(s) == shadow.frequency(s));
    }
  }
  // Final tables equal the encoder's.
  for (uint32_t s = 0; s < 64; ++s)
    CHECK(dec_model.frequency(s) == enc_model.frequency(s));
}

TEST_CASE("random multi-context streams round-trip exactly") {
  std::mt19937_64 rng(20240818);
  for (int round = 0; round < 1000; ++round) {
    const uint32_t alphabet = 2 + uint32_t(rng() % 299);
    const uint32_t contexts = 1 + uint32_t(rng() % 4);
    const size_t length = rng() % 600;

    std::vector<uint32_t> ctx(length), sym(length);
    for (size_t i = 0; i < length; ++i) {
      ctx[i] = uint32_t(rng() % contexts);
      // Skewed draws so adaptation (and occasionally rescaling) matters.
      sym[i] = (rng() % 3 == 0) ? uint32_t(rng() % alphabet)
                                : uint32_t(rng() % (1 + alphabet / 4));
    }

    std::vector<SymbolModel> enc_models(contexts, SymbolModel(alphabet));
    RangeEncoder enc;
    for (size_t i = 0; i < length; ++i) enc_models[ctx[i]].encode(enc, sym[i]);
    enc.finish();

    std::vector<SymbolModel> dec_models(contexts, SymbolModel(alphabet));
    RangeDecoder dec(enc.bytes().data(), enc.bytes().size());
    bool all_ok = true;
    for (size_t i = 0; i < length; ++i)
      all_ok = all_ok && (dec_models[ctx[i]].decode(dec) == sym[i]);
    REQUIRE(all_ok);
    REQUIRE(dec.bytes_consumed() == enc.bytes().size());
  }
}

TEST_CASE("truncated streams raise instead of fabricating symbols") {
  SymbolModel enc_model(256);
  RangeEncoder enc;
  std::mt19937_64 rng(5);
  std::vector<uint32_t> symbols(500);
  for (auto& s : symbols) s = uint32_t(rng() % 256);
  for (uint32_t s : symbols) enc_model.encode(enc, s);
  enc.finish();

  for (size_t cut : {size_t(1), size_t(2), size_t(10), enc.bytes().size() - 3}) {
    const size_t keep = enc.bytes().size() - cut;
    bool threw = false;
    try {
      SymbolModel dec_model(256);
      RangeDecoder dec(enc.bytes().data(), keep);  // may throw on preload
      for (size_t i = 0; i < symbols.size(); ++i) (void)dec_model.decode(dec);
    } catch (const Error& e) {
      threw = true;
      CHECK(e.kind() == ErrorKind::kTruncated);
    }
    CHECK(threw);
  }
  // The empty buffer cannot even preload its window.
  CHECK_THROWS_AS(RangeDecoder(nullptr, 0), Error);
}

TEST_CASE("desynchronized windows are detected") {
  // An all-ones buffer puts the code value in the slack above every symbol
  // interval of a strongly skewed model.
  const std::vector<uint8_t> junk(8, 0xff);
  SymbolModel m(2);
  RangeDecoder dec(junk.data(), junk.size());
  CHECK_THROWS_AS((void)m.decode(dec), Error);
}

TEST_CASE("model rejects out-of-alphabet symbols and bad sizes") {
  SymbolModel m(10);
  RangeEncoder enc;
  CHECK_THROWS_AS(m.encode(enc, 10), Error);
  CHECK_THROWS_AS(SymbolModel(0), Error);
  CHECK_THROWS_AS(SymbolModel(gradpix::kMaxTotalFrequency + 1), Error);
}
