#pragma once

#include <cstdint>
#include <vector>

namespace strideskip {

struct ImageDims {
  int width = 0;
  int height = 0;

  double half_diagonal() const;
  double diagonal() const;
  bool operator==(const ImageDims&) const = default;
};

/// 8-bit interleaved RGB frame.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major, 3 bytes per pixel
  int index = 0;

  Frame() = default;
  Frame(int w, int h, int idx = 0);

  ImageDims dims() const { return {width, height}; }
  std::uint8_t* pixel(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &data[(static_cast<std::size_t>(y) * width + x) * 3];
  }
};

/// Throws InputError unless the frame satisfies the size invariants.
void validate_frame(const Frame& f);

/// Single-channel image with values in [0,1].
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  GrayFrame() = default;
  GrayFrame(int w, int h, float fill = 0.f)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

  /// Bilinear sample with border replication.
  float sample(double x, double y) const;
  double mean() const;
};

struct Pyramid {
  std::vector<GrayFrame> levels;

  int level_count() const { return static_cast<int>(levels.size()); }
  const GrayFrame& base() const { return levels.front(); }
};

/// BT.601 luma scaled to [0,1].
GrayFrame to_grayscale(const Frame& f);

/// 2x2 box-filtered dyadic pyramid; stops before a level would drop below 8x8.
Pyramid build_pyramid(const GrayFrame& g, int max_levels);

struct ScaledGray {
  GrayFrame image;
  double scale_x = 1.0;  // analysis pixels per source pixel
  double scale_y = 1.0;
};

/// Area-averaging resize so that the longer side is at most max_side.
ScaledGray downscale_to_fit(const GrayFrame& g, int max_side);

}  // namespace strideskip
