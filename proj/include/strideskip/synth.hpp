#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <cstdint>
#include <span>
#include <vector>

#include "strideskip/flow.hpp"
#include "strideskip/image.hpp"

namespace strideskip {

/// A glance: yaw moves quickly to target, holds, and returns within `duration` frames.
struct Saccade {
  int frame = 0;
  double target_deg = 0.0;
  int duration = 12;
};

struct WalkSceneParams {
  int frames = 300;
  ImageDims dims{320, 240};
  double forward_speed = 0.05;     // world units per frame
  double sway_amplitude = 0.0;     // lateral head excursion, world units
  double sway_period = 30.0;       // frames per full left-right cycle
  double sway_phase = 0.0;         // radians
  double yaw_amplitude_deg = 0.0;
  double yaw_period = 60.0;
  double yaw_offset_deg = 0.0;     // constant heading offset
  std::vector<Saccade> saccades;
  int points = 300;                // approximate number of points in view
  double depth_min = 5.0;
  double depth_max = 50.0;
  double noise_sigma = 0.0;        // Gaussian flow noise, pixels
  double depth_smoothing = 0.25;   // anchor depth kernel width, in grid cells
  std::uint64_t seed = 1;
  GridSpec grid;

  void validate() const;
};

/// Camera pose; the camera looks along +z of its rotation, x right, y down.
struct CameraPose {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double yaw = 0.0;  // radians, positive turns toward +x

  /// Camera-to-world rotation.
  Eigen::Matrix3d rotation() const;
};

struct ScenePoint {
  Eigen::Vector3d position;
  std::array<std::uint8_t, 3> color;
};

struct SyntheticSequence {
  WalkSceneParams params;
  std::vector<CameraPose> poses;
  std::vector<ScenePoint> points;
  std::vector<FlowGrid> flows;       // exact flow for each consecutive pair
  std::vector<double> head_offset;   // lateral camera position per frame
  SwayCurve sway;                    // cumulative x shift of `flows`

  double focal() const { return params.dims.width; }
  int frame_count() const { return static_cast<int>(poses.size()); }
};

/// Periodic glances alternating left and right, starting half a period in.
std::vector<Saccade> periodic_saccades(int frames, int every, int duration, double angle_deg,
                                       std::uint64_t seed, int jitter = 0);

double yaw_at(const WalkSceneParams& p, int t);

SyntheticSequence generate_walk_scene(const WalkSceneParams& p);

struct DirectionTruth {
  Vec2 point = Vec2::Zero();  // centered coordinates; undefined when at_infinity
  bool at_infinity = false;
};

/// Translation from camera t to camera t+k projected into image t.
DirectionTruth ground_truth_direction(std::span<const CameraPose> poses, int t, int k, ImageDims dims);

/// Centered-coordinate projection of a world point; nullopt behind the camera.
std::optional<Vec2> project_point(const CameraPose& pose, const Eigen::Vector3d& X, double focal);

/// F with x_b' F x_a = 0 for pixel positions in the two views.
Eigen::Matrix3d fundamental_from_poses(const CameraPose& a, const CameraPose& b, double focal,
                                       ImageDims dims);

/// Splats the points as 3x3 textured disks over a gradient background.
Frame render_frame(const SyntheticSequence& seq, int t);

}  // namespace strideskip
