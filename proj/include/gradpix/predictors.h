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

#ifndef GRADPIX_PREDICTORS_H_
#define GRADPIX_PREDICTORS_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "gradpix/image.h"

namespace gradpix {

// Causal neighborhood of the current pixel `*` in raster-scan order:
//
//        NN NNE
//     NW N  NE
//  WW W  *
//
// Pixels outside the image are substituted by the border rule implemented in
// neighborhood_in_plane(): the first row replicates the west sample, the
// first column replicates the north sample, and second-order neighbors fall
// back to their first-order counterparts.
struct CausalNeighborhood {
  uint16_t w = 0;    // left
  uint16_t n = 0;    // above
  uint16_t nw = 0;   // above-left
  uint16_t ne = 0;   // above-right
  uint16_t ww = 0;   // two left
  uint16_t nn = 0;   // two above
  uint16_t nne = 0;  // two above, one right
};

// Vertical/horizontal gradient magnitudes used by the switching predictors.
struct GradientPair {
  int32_t vertical = 0;
  int32_t horizontal = 0;
};

// Wire identifiers; the numeric values are part of the container format.
enum class Predictor : uint8_t {
  kZero = 0,
  kWest = 1,
  kNorth = 2,
  kAverage = 3,
  kMed = 4,
  kGed = 5,
  kGap = 6,
};

inline constexpr int16_t kDefaultGedThreshold = 8;

// A predictor selection plus its tuning parameter (only GED has one).
struct PredictorKind {
  Predictor variant = Predictor::kMed;
  int16_t ged_threshold = kDefaultGedThreshold;
};

// Gathers the neighborhood of (x, y) from a single channel plane of `width`
// by `height` samples, applying the border rule.
CausalNeighborhood neighborhood_in_plane(const uint16_t* plane, uint32_t width,
                                         uint32_t height, uint32_t x,
                                         uint32_t y);

// Convenience wrapper over neighborhood_in_plane() for a whole image.
CausalNeighborhood neighborhood_at(const RasterImage& img, int channel,
                                   uint32_t x, uint32_t y);

// Gradient estimates: GAP uses all seven neighbors, GED only the five
// first/second-order west/north samples.
GradientPair gap_gradients(const CausalNeighborhood& n);
GradientPair ged_gradients(const CausalNeighborhood& n);

// Median edge detector. Clamps the gradient estimate W + N - NW against the
// NW sample: if NW >= max(W, N) predict max(W, N), if NW <= min(W, N)
// predict min(W, N).
uint16_t predict_med(const CausalNeighborhood& n, uint16_t max_value);

// Gradient-adjusted predictor: sharp-edge cutoffs at |dv - dh| >= 80 select
// W or N outright; otherwise a base estimate
//   floor((W + N) / 2) + floor((NE - NW) / 4)
// is refined by blending toward W or N at the 32 and 8 gradient tiers.
uint16_t predict_gap(const CausalNeighborhood& n, uint16_t max_value);

// Gradient edge detector: when the vertical/horizontal gradient difference
// exceeds `threshold` the edge direction picks W or N; otherwise the smooth
// estimate floor((9 * (W + N) + 2 * (NW + WW + NN)) / 24) is used.
uint16_t predict_ged(const CausalNeighborhood& n, int16_t threshold,
                     uint16_t max_value);

// Dispatches on kind.variant. All predictions are clamped to
// [0, max_value] as their final step.
uint16_t predict(const PredictorKind& kind, const CausalNeighborhood& n,
                 uint16_t max_value);

// Stable lowercase tags used in CLI flags, CSV rows and file names.
const char* predictor_tag(Predictor p);
std::optional<Predictor> predictor_from_tag(std::string_view tag);

// All predictors in wire-id order.
inline constexpr Predictor kAllPredictors[] = {
    Predictor::kZero, Predictor::kWest, Predictor::kNorth, Predictor::kAverage,
    Predictor::kMed,  Predictor::kGed,  Predictor::kGap,
};

// The three gradient predictors compared by the benchmark by default.
inline constexpr Predictor kGradientPredictors[] = {
    Predictor::kMed,
    Predictor::kGed,
    Predictor::kGap,
};

}  // namespace gradpix

#endif  // GRADPIX_PREDICTORS_H_
