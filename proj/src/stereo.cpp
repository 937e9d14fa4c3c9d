#include "strideskip/stereo.hpp"

#include <algorithm>

#include "strideskip/errors.hpp"

namespace strideskip {

SwayCurve smooth_curve(const SwayCurve& s, int window) {
  const int n = static_cast<int>(s.values.size());
  if (window < 1 || window % 2 == 0 || window > std::max(n, 1)) {
    throw InputError("smoothing window must be odd, >= 1 and <= curve length");
  }
  const int half = window / 2;
  SwayCurve out;
  out.values.resize(s.values.size());
  for (int i = 0; i < n; ++i) {
    const int h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (int j = i - h; j <= i + h; ++j) sum += s.values[static_cast<std::size_t>(j)];
    out.values[static_cast<std::size_t>(i)] = sum / (2 * h + 1);
  }
  return out;
}

std::vector<int> find_prominent_peaks(std::span<const double> v, double min_prominence) {
  const int n = static_cast<int>(v.size());
  std::vector<int> peaks;
  int i = 1;
  while (i < n - 1) {
    if (v[static_cast<std::size_t>(i - 1)] < v[static_cast<std::size_t>(i)]) {
      int ahead = i + 1;
      while (ahead < n - 1 && v[static_cast<std::size_t>(ahead)] == v[static_cast<std::size_t>(i)]) ++ahead;
      if (v[static_cast<std::size_t>(ahead)] < v[static_cast<std::size_t>(i)]) {
        peaks.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }

  std::vector<int> kept;
  for (int p : peaks) {
    const double height = v[static_cast<std::size_t>(p)];
    double left_min = height, right_min = height;
    for (int j = p; j >= 0 && v[static_cast<std::size_t>(j)] <= height; --j) {
      left_min = std::min(left_min, v[static_cast<std::size_t>(j)]);
    }
    for (int j = p; j < n && v[static_cast<std::size_t>(j)] <= height; ++j) {
      right_min = std::min(right_min, v[static_cast<std::size_t>(j)]);
    }
    if (height - std::max(left_min, right_min) >= min_prominence) kept.push_back(p);
  }
  return kept;
}

SwayExtrema detect_sway_extrema(const SwayCurve& s, int window, double prominence) {
  SwayExtrema e;
  e.window = window;
  e.prominence = prominence;
  if (s.values.size() < 3) return e;
  const SwayCurve smooth = smooth_curve(s, window);
  std::vector<double> negated(smooth.values.size());
  std::transform(smooth.values.begin(), smooth.values.end(), negated.begin(), [](double x) { return -x; });
  e.left_peaks = find_prominent_peaks(smooth.values, prominence);
  e.right_peaks = find_prominent_peaks(negated, prominence);
  return e;
}

StereoPairs pair_stereo_frames(const SwayExtrema& e) {
  StereoPairs out;
  if (e.left_peaks.empty() || e.right_peaks.empty()) return out;

  std::vector<int> all(e.left_peaks);
  all.insert(all.end(), e.right_peaks.begin(), e.right_peaks.end());
  std::sort(all.begin(), all.end());
  std::vector<int> gaps;
  for (std::size_t i = 1; i < all.size(); ++i) gaps.push_back(all[i] - all[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const int median_gap = gaps[(gaps.size() - 1) / 2];
  const int max_separation = 2 * median_gap;

  int last_used = -1;
  for (int r : e.right_peaks) {
    if (r <= last_used) continue;
    const auto it = std::upper_bound(e.left_peaks.begin(), e.left_peaks.end(), r);
    if (it == e.left_peaks.end()) break;
    if (*it - r > max_separation) continue;
    out.pairs.push_back({*it, r});
    last_used = *it;
  }
  return out;
}

StereoPairs swap_eyes(StereoPairs p) {
  for (auto& pair : p.pairs) std::swap(pair.left, pair.right);
  return p;
}

Frame compose_anaglyph(const Frame& left, const Frame& right) {
  if (left.width != right.width || left.height != right.height) {
    throw InputError("anaglyph frames must have equal dimensions");
  }
  Frame out = right;
  out.index = left.index;
  const std::size_t n = static_cast<std::size_t>(left.width) * left.height;
  for (std::size_t i = 0; i < n; ++i) out.data[i * 3] = left.data[i * 3];
  return out;
}

Frame compose_side_by_side(const Frame& left, const Frame& right) {
  if (left.width != right.width || left.height != right.height) {
    throw InputError("side-by-side frames must have equal dimensions");
  }
  Frame out(left.width * 2, left.height, left.index);
  const std::size_t row = static_cast<std::size_t>(left.width) * 3;
  for (int y = 0; y < left.height; ++y) {
    std::copy_n(left.pixel(0, y), row, out.pixel(0, y));
    std::copy_n(right.pixel(0, y), row, out.pixel(left.width, y));
  }
  return out;
}

}  // namespace strideskip
