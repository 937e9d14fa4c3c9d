#pragma once

#include <span>
#include <vector>

#include "strideskip/flow.hpp"
#include "strideskip/image.hpp"

namespace strideskip {

/// Frame indices where the head is at its left-most or right-most position.
///
/// The sway curve accumulates image-space x flow, which moves opposite to the
/// camera: curve maxima are left-most head positions, minima right-most.
struct SwayExtrema {
  std::vector<int> left_peaks;
  std::vector<int> right_peaks;
  int window = 5;
  double prominence = 1.0;
};

struct StereoPair {
  int left = 0;   // frame for the left eye
  int right = 0;  // frame for the right eye
  bool operator==(const StereoPair&) const = default;
};

struct StereoPairs {
  std::vector<StereoPair> pairs;
};

/// Centered moving average; the window shrinks symmetrically near the ends.
SwayCurve smooth_curve(const SwayCurve& s, int window);

/// Local maxima of `values` whose prominence is at least `min_prominence`.
/// Plateaus report their middle sample; endpoints never qualify.
std::vector<int> find_prominent_peaks(std::span<const double> values, double min_prominence);

SwayExtrema detect_sway_extrema(const SwayCurve& s, int window = 5, double prominence = 1.0);

/// Pairs each right peak with the next left peak, keeping pairs ordered and
/// non-overlapping and no wider than twice the median peak spacing.
StereoPairs pair_stereo_frames(const SwayExtrema& e);

StereoPairs swap_eyes(StereoPairs p);

/// Red from the left frame, green and blue from the right.
Frame compose_anaglyph(const Frame& left, const Frame& right);

Frame compose_side_by_side(const Frame& left, const Frame& right);

}  // namespace strideskip
