#include "strideskip/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "strideskip/errors.hpp"

namespace strideskip {

double ImageDims::diagonal() const { return std::hypot(static_cast<double>(width), height); }
double ImageDims::half_diagonal() const { return 0.5 * diagonal(); }

Frame::Frame(int w, int h, int idx)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0), index(idx) {}

void validate_frame(const Frame& f) {
  if (f.width < 16 || f.height < 16) {
    throw InputError("frame " + std::to_string(f.index) + " is " + std::to_string(f.width) + "x" +
                     std::to_string(f.height) + ", minimum is 16x16");
  }
  if (f.data.size() != static_cast<std::size_t>(f.width) * f.height * 3) {
    throw InputError("frame " + std::to_string(f.index) + " has inconsistent pixel buffer size");
  }
}

float GrayFrame::sample(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  const int x0 = std::min(static_cast<int>(x), width - 2 < 0 ? 0 : width - 2);
  const int y0 = std::min(static_cast<int>(y), height - 2 < 0 ? 0 : height - 2);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = (1.0 - ax) * at(x0, y0) + ax * at(x1, y0);
  const double bottom = (1.0 - ax) * at(x0, y1) + ax * at(x1, y1);
  return static_cast<float>((1.0 - ay) * top + ay * bottom);
}

double GrayFrame::mean() const {
  double sum = 0.0;
  for (float v : data) sum += v;
  return data.empty() ? 0.0 : sum / static_cast<double>(data.size());
}

GrayFrame to_grayscale(const Frame& f) {
  GrayFrame g(f.width, f.height);
  const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = &f.data[i * 3];
    const double luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    g.data[i] = static_cast<float>(std::min(1.0, luma / 255.0));
  }
  return g;
}

namespace {

GrayFrame half_size(const GrayFrame& src) {
  GrayFrame dst(src.width / 2, src.height / 2);
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      const float sum = src.at(2 * x, 2 * y) + src.at(2 * x + 1, 2 * y) +
                        src.at(2 * x, 2 * y + 1) + src.at(2 * x + 1, 2 * y + 1);
      dst.at(x, y) = 0.25f * sum;
    }
  }
  return dst;
}

}  // namespace

Pyramid build_pyramid(const GrayFrame& g, int max_levels) {
  if (g.width < 16 || g.height < 16) {
    throw InputError("pyramid input must be at least 16x16");
  }
  if (max_levels < 1) throw InputError("max_levels must be >= 1");
  Pyramid p;
  p.levels.push_back(g);
  while (p.level_count() < max_levels) {
    const GrayFrame& last = p.levels.back();
    if (last.width / 2 < 8 || last.height / 2 < 8) break;
    p.levels.push_back(half_size(last));
  }
  return p;
}

ScaledGray downscale_to_fit(const GrayFrame& g, int max_side) {
  const int longest = std::max(g.width, g.height);
  if (longest <= max_side) return {g, 1.0, 1.0};
  const double s = static_cast<double>(max_side) / longest;
  const int w = std::max(1, static_cast<int>(std::lround(g.width * s)));
  const int h = std::max(1, static_cast<int>(std::lround(g.height * s)));
  const double sx = static_cast<double>(g.width) / w;
  const double sy = static_cast<double>(g.height) / h;
  GrayFrame out(w, h);
  // Exact area integration of source pixels covered by each destination pixel.
  for (int y = 0; y < h; ++y) {
    const double y0 = y * sy, y1 = (y + 1) * sy;
    for (int x = 0; x < w; ++x) {
      const double x0 = x * sx, x1 = (x + 1) * sx;
      double acc = 0.0, area = 0.0;
      for (int yy = static_cast<int>(y0); yy < std::min(g.height, static_cast<int>(std::ceil(y1))); ++yy) {
        const double wy = std::min<double>(yy + 1, y1) - std::max<double>(yy, y0);
        if (wy <= 0) continue;
        for (int xx = static_cast<int>(x0); xx < std::min(g.width, static_cast<int>(std::ceil(x1))); ++xx) {
          const double wx = std::min<double>(xx + 1, x1) - std::max<double>(xx, x0);
          if (wx <= 0) continue;
          acc += wx * wy * g.at(xx, yy);
          area += wx * wy;
        }
      }
      out.at(x, y) = static_cast<float>(acc / area);
    }
  }
  return {std::move(out), static_cast<double>(w) / g.width, static_cast<double>(h) / g.height};
}

}  // namespace strideskip
