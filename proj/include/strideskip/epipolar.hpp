#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strideskip/flow.hpp"

namespace strideskip {

/// Either a value or the reason it could not be produced.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string failure;

  static Outcome ok(T v) { return {std::move(v), {}}; }
  static Outcome fail(std::string why) { return {std::nullopt, std::move(why)}; }
  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

/// Point matches between frame t (`from`) and frame t+k (`to`).
struct Correspondences {
  std::vector<Vec2> from;
  std::vector<Vec2> to;

  std::size_t size() const { return from.size(); }
};

/// Epipolar constraint to' * F * from = 0 in pixel coordinates.
struct FundamentalMatrix {
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
  int inlier_count = 0;
  double inlier_ratio = 0.0;
};

enum class DirectionSource { epipole, foe, unavailable };
enum class DirectionMode { epipolar, foe_only };

const char* to_string(DirectionSource s);
const char* to_string(DirectionMode m);
DirectionSource direction_source_from_string(const std::string& s);
DirectionMode direction_mode_from_string(const std::string& s);

/// Estimated camera translation direction for the span (first, last), in
/// centered image coordinates. `point` is meaningless when unavailable.
struct MotionDirection {
  Vec2 point = Vec2::Zero();
  DirectionSource source = DirectionSource::unavailable;
  int first = 0;
  int last = 0;

  bool available() const { return source != DirectionSource::unavailable; }
};

struct RansacParams {
  int iterations = 500;
  double inlier_threshold = 1.5;  // Sampson distance, pixels
  int min_inliers = 16;
  double min_inlier_ratio = 0.5;
  double confidence = 0.999;      // early-exit confidence for adaptive iteration count
  /// Rejects F when a homography explains this fraction of its inliers.
  double homography_ratio = 0.9;
  std::uint64_t seed = 0;
};

/// Seed used for the (t, k) estimate.
inline std::uint64_t ransac_seed(int t, int k) {
  return static_cast<std::uint64_t>(t) * 100003ULL + static_cast<std::uint64_t>(k);
}

/// Advances grid anchors through successive flow grids by bilinear
/// interpolation of the surrounding anchors' vectors.
class CorrespondenceChainer {
 public:
  CorrespondenceChainer(const GridSpec& grid, ImageDims dims);

  /// Starts chains at the valid anchors of `first` and applies its vectors.
  void start(const FlowGrid& first);
  void advance(const FlowGrid& g);
  Correspondences current() const;
  std::size_t alive() const { return start_.size(); }

 private:
  std::optional<Vec2> interpolate(const FlowGrid& g, const Vec2& q) const;
  bool inside(const Vec2& q) const;

  GridSpec grid_;
  ImageDims dims_;
  Vec2 origin_;
  Vec2 step_;
  std::vector<Vec2> start_;
  std::vector<Vec2> position_;
};

Correspondences chain_correspondences(std::span<const FlowGrid> flows, const GridSpec& grid,
                                      ImageDims dims);

/// Normalized 8-point solve on all given matches (no rank or inlier bookkeeping).
std::optional<Eigen::Matrix3d> fundamental_8point(std::span<const Vec2> from,
                                                  std::span<const Vec2> to);

double sampson_distance(const Eigen::Matrix3d& F, const Vec2& from, const Vec2& to);

Outcome<FundamentalMatrix> estimate_fundamental_ransac(const Correspondences& c,
                                                       const RansacParams& params);

/// Right null vector of F, shifted to centered coordinates.
Outcome<Vec2> epipole_from_f(const FundamentalMatrix& F, ImageDims dims);

struct FoeParams {
  int min_vectors = 10;
  double min_norm = 0.05;
  double max_condition = 1e8;
};

/// Least-squares intersection of the flow lines, centered coordinates.
Outcome<Vec2> estimate_foe(const IntegratedFlow& g, ImageDims dims, const FoeParams& params = {});

/// Epipole first (in epipolar mode), FOE of the mean flow as fallback.
MotionDirection resolve_direction(const Correspondences& chains, const IntegratedFlow& mean_flow,
                                  ImageDims dims, DirectionMode mode, RansacParams ransac, int t,
                                  int k);

/// Direction for frames (t, t+k) given the full list of consecutive grids.
MotionDirection motion_direction(int t, int k, std::span<const FlowGrid> flows,
                                 const GridSpec& grid, ImageDims dims, DirectionMode mode,
                                 const RansacParams& ransac = {});

}  // namespace strideskip
