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

#include "gradpix/predictors.h"

#include <algorithm>
#include <cstdlib>

#include "gradpix/error.h"

namespace gradpix {

namespace {

// Floor division (round toward negative infinity); C++ / truncates.
constexpr int64_t floor_div(int64_t a, int64_t b) {
  const int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

constexpr uint16_t clamp_to(int64_t v, uint16_t max_value) {
  return uint16_t(std::clamp<int64_t>(v, 0, max_value));
}

constexpr int64_t absdiff(int64_t a, int64_t b) { return a < b ? b - a : a - b; }

}  // namespace

CausalNeighborhood neighborhood_in_plane(const uint16_t* plane, uint32_t width,
                                         uint32_t height, uint32_t x,
                                         uint32_t y) {
  (void)height;
  auto s = [&](uint32_t px, uint32_t py) -> uint16_t {
    return plane[size_t(py) * width + px];
  };

  CausalNeighborhood nb;
  if (y == 0) {
    // Top row: every north-side neighbor replicates the west sample.
    const uint16_t w0 = x >= 1 ? s(x - 1, 0) : 0;
    nb.w = nb.n = nb.nw = nb.ne = nb.nn = nb.nne = w0;
    nb.ww = x >= 2 ? s(x - 2, 0) : nb.w;
    return nb;
  }
  nb.n = s(x, y - 1);
  nb.nw = x >= 1 ? s(x - 1, y - 1) : nb.n;
  nb.ne = x + 1 < width ? s(x + 1, y - 1) : nb.n;
  nb.w = x >= 1 ? s(x - 1, y) : nb.n;
  nb.ww = x >= 2 ? s(x - 2, y) : nb.w;
  if (y >= 2) {
    nb.nn = s(x, y - 2);
    nb.nne = x + 1 < width ? s(x + 1, y - 2) : nb.n;
  } else {
    nb.nn = nb.n;
    nb.nne = nb.ne;
  }
  return nb;
}

CausalNeighborhood neighborhood_at(const RasterImage& img, int channel,
                                   uint32_t x, uint32_t y) {
  if (channel < 0 || channel >= img.channels)
    fail(ErrorKind::kBadArgument, "channel index out of range");
  if (x >= img.width || y >= img.height)
    fail(ErrorKind::kBadArgument, "pixel coordinates out of range");
  return neighborhood_in_plane(img.plane(channel), img.width, img.height, x, y);
}

GradientPair gap_gradients(const CausalNeighborhood& n) {
  GradientPair g;
  g.vertical = int32_t(absdiff(n.w, n.ww) + absdiff(n.n, n.nw) + absdiff(n.n, n.ne));
  g.horizontal = int32_t(absdiff(n.w, n.nw) + absdiff(n.n, n.nn) + absdiff(n.ne, n.nne));
  return g;
}

GradientPair ged_gradients(const CausalNeighborhood& n) {
  GradientPair g;
  g.vertical = int32_t(absdiff(n.nw, n.w) + absdiff(n.nn, n.n));
  g.horizontal = int32_t(absdiff(n.ww, n.w) + absdiff(n.nw, n.n));
  return g;
}

uint16_t predict_med(const CausalNeighborhood& nb, uint16_t max_value) {
  const int64_t a = nb.w, b = nb.n, c = nb.nw;
  const int64_t hi = std::max(a, b);
  const int64_t lo = std::min(a, b);
  int64_t p;
  if (c >= hi) {
    p = hi;
  } else if (c <= lo) {
    p = lo;
  } else {
    p = a + b - c;
  }
  return clamp_to(p, max_value);
}

uint16_t predict_gap(const CausalNeighborhood& nb, uint16_t max_value) {
  const GradientPair g = gap_gradients(nb);
  const int64_t d = int64_t(g.vertical) - int64_t(g.horizontal);
  const int64_t w = nb.w, n = nb.n, ne = nb.ne, nw = nb.nw;

  int64_t p;
  if (d > 80) {
    p = w;
  } else if (d < -80) {
    p = n;
  } else {
    p = floor_div(w + n, 2) + floor_div(ne - nw, 4);
    if (d > 32) {
      p = floor_div(p + w, 2);
    } else if (d > 8) {
      p = floor_div(3 * p + w, 4);
    } else if (d < -32) {
      p = floor_div(p + n, 2);
    } else if (d < -8) {
      p = floor_div(3 * p + n, 4);
    }
  }
  return clamp_to(p, max_value);
}

uint16_t predict_ged(const CausalNeighborhood& nb, int16_t threshold,
                     uint16_t max_value) {
  const GradientPair g = ged_gradients(nb);
  const int64_t gv = g.vertical, gh = g.horizontal;
  const int64_t a = nb.w, b = nb.n;

  int64_t p;
  if (gv - gh > threshold) {
    p = a;
  } else if (gh - gv > threshold) {
    p = b;
  } else {
    p = floor_div(9 * (a + b) + 2 * (int64_t(nb.nw) + nb.ww + nb.nn), 24);
  }
  return clamp_to(p, max_value);
}

uint16_t predict(const PredictorKind& kind, const CausalNeighborhood& nb,
                 uint16_t max_value) {
  switch (kind.variant) {
    case Predictor::kZero:
      return 0;
    case Predictor::kWest:
      return clamp_to(nb.w, max_value);
    case Predictor::kNorth:
      return clamp_to(nb.n, max_value);
    case Predictor::kAverage:
      return clamp_to(floor_div(int64_t(nb.w) + nb.n, 2), max_value);
    case Predictor::kMed:
      return predict_med(nb, max_value);
    case Predictor::kGed:
      return predict_ged(nb, kind.ged_threshold, max_value);
    case Predictor::kGap:
      return predict_gap(nb, max_value);
  }
  fail(ErrorKind::kBadArgument, "unknown predictor id");
}

const char* predictor_tag(Predictor p) {
  switch (p) {
    case Predictor::kZero: return "zero";
    case Predictor::kWest: return "west";
    case Predictor::kNorth: return "north";
    case Predictor::kAverage: return "average";
    case Predictor::kMed: return "med";
    case Predictor::kGed: return "ged";
    case Predictor::kGap: return "gap";
  }
  return "?";
}

std::optional<Predictor> predictor_from_tag(std::string_view tag) {
  for (Predictor p : kAllPredictors)
    if (tag == predictor_tag(p)) return p;
  return std::nullopt;
}

}  // namespace gradpix
