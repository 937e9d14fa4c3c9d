#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "strideskip/image.hpp"

namespace strideskip {

using Vec2 = Eigen::Vector2d;

// Image positions throughout the library are continuous coordinates: the
// image covers [0,W]x[0,H], pixel (i,j) has its center at (i+0.5, j+0.5) and
// the image center is (W/2, H/2).

inline Vec2 image_center(ImageDims d) { return {0.5 * d.width, 0.5 * d.height}; }

/// Regular anchor lattice inset by a fractional margin.
struct GridSpec {
  int rows = 5;
  int cols = 10;
  double margin = 0.05;

  void validate() const;
  int size() const { return rows * cols; }
  /// Row-major anchor positions for an image of the given size.
  std::vector<Vec2> anchors(ImageDims dims) const;
  /// Anchor spacing in pixels along x and y.
  Vec2 spacing(ImageDims dims) const;
  /// Position of the first anchor (row 0, column 0).
  Vec2 origin(ImageDims dims) const;
};

/// Sparse flow between frame t and t+1, sampled at the grid anchors.
struct FlowGrid {
  int t = 0;
  std::vector<Vec2> points;
  std::vector<Vec2> vectors;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return points.size(); }
  std::size_t valid_count() const;
};

enum class Aggregate { mean, sum };

/// Per-anchor temporal aggregate over grids t..last_t-1 (span t..last_t).
struct IntegratedFlow {
  std::vector<Vec2> points;
  std::vector<Vec2> vectors;
  Aggregate kind = Aggregate::mean;
  int first = 0;  // frame t
  int last = 0;   // frame t+k
};

/// Cumulative mean horizontal flow; values[t] is the shift accumulated up to frame t.
struct SwayCurve {
  std::vector<double> values;
};

struct LkParams {
  int window = 15;
  int levels = 3;
  int max_iterations = 20;
  double epsilon = 0.01;         // convergence threshold, pixels
  double min_eigen_ratio = 1e-4; // smaller eigenvalue relative to gradient energy
};

/// Pyramidal Lucas-Kanade tracking of the grid anchors from prev to next.
/// Anchors and vectors are in base-level pixel units.
FlowGrid sparse_lk_flow(const Pyramid& prev, const Pyramid& next, const GridSpec& grid,
                        const LkParams& params = {}, int t = 0);

/// Running per-anchor sums; an anchor stays in the aggregate only while valid in every grid.
class FlowAccumulator {
 public:
  void add(const FlowGrid& g);
  int count() const { return count_; }
  IntegratedFlow result(Aggregate kind) const;
  void reset() { *this = FlowAccumulator{}; }

 private:
  std::vector<Vec2> points_;
  std::vector<Vec2> sums_;
  std::vector<std::uint8_t> alive_;
  int first_ = 0;
  int count_ = 0;
};

/// Aggregates consecutive grids; throws InputError on empty input or a frame gap.
IntegratedFlow integrate_flow(std::span<const FlowGrid> flows, Aggregate kind);

/// Mean Euclidean norm of the aggregated vectors; nullopt when no anchor survived.
std::optional<double> mean_flow_magnitude(const IntegratedFlow& g);

struct FlowStatistics {
  std::vector<std::optional<double>> per_frame;  // mean magnitude of valid vectors
  double global_average = 0.0;                   // mean over frames that had any
};

FlowStatistics sequence_flow_statistics(std::span<const FlowGrid> flows);

SwayCurve cumulative_x_shift(std::span<const FlowGrid> flows);

}  // namespace strideskip
