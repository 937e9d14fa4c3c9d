#include "strideskip/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "strideskip/errors.hpp"

namespace strideskip {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNearPlane = 0.1;

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

void WalkSceneParams::validate() const {
  if (frames < 2) throw InputError("synthetic scene needs at least 2 frames");
  if (dims.width < 16 || dims.height < 16) throw InputError("synthetic frames must be at least 16x16");
  if (sway_period < 4 || yaw_period < 4) throw InputError("sway and yaw periods must be >= 4 frames");
  if (!(depth_min > 0) || !(depth_max > depth_min)) throw InputError("depth range must be positive");
  if (points < 1) throw InputError("point density must be >= 1");
  if (noise_sigma < 0) throw InputError("noise sigma must be >= 0");
  if (!(depth_smoothing > 0)) throw InputError("depth smoothing must be > 0");
  for (const auto& s : saccades) {
    if (s.duration < 2) throw InputError("saccade duration must be >= 2 frames");
  }
  grid.validate();
}

Eigen::Matrix3d CameraPose::rotation() const {
  const double c = std::cos(yaw), s = std::sin(yaw);
  Eigen::Matrix3d R;
  R << c, 0, s, 0, 1, 0, -s, 0, c;
  return R;
}

std::vector<Saccade> periodic_saccades(int frames, int every, int duration, double angle_deg,
                                       std::uint64_t seed, int jitter) {
  std::vector<Saccade> out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> shift(-jitter, jitter);
  double sign = 1.0;
  for (int f = every / 2; f + duration < frames; f += every) {
    const int start = std::max(0, f + (jitter > 0 ? shift(rng) : 0));
    out.push_back({start, sign * angle_deg, duration});
    sign = -sign;
  }
  return out;
}

double yaw_at(const WalkSceneParams& p, int t) {
  double yaw = p.yaw_offset_deg + p.yaw_amplitude_deg * std::sin(2.0 * std::numbers::pi * t / p.yaw_period);
  for (const auto& s : p.saccades) {
    if (t < s.frame || t >= s.frame + s.duration) continue;
    const double ramp = std::clamp(s.duration / 4.0, 1.0, 4.0);
    const double local = t - s.frame;
    const double up = smoothstep(local / ramp);
    const double down = smoothstep((s.duration - local) / ramp);
    yaw += s.target_deg * std::min(up, down);
  }
  return yaw * kDeg;
}

std::optional<Vec2> project_point(const CameraPose& pose, const Eigen::Vector3d& X, double focal) {
  const Eigen::Vector3d Xc = pose.rotation().transpose() * (X - pose.center);
  if (Xc.z() <= kNearPlane) return std::nullopt;
  return Vec2(focal * Xc.x() / Xc.z(), focal * Xc.y() / Xc.z());
}

SyntheticSequence generate_walk_scene(const WalkSceneParams& p) {
  p.validate();
  SyntheticSequence seq;
  seq.params = p;
  const double f = seq.focal();
  const ImageDims dims = p.dims;
  const Vec2 center = image_center(dims);

  double max_yaw = std::abs(p.yaw_offset_deg) + std::abs(p.yaw_amplitude_deg);
  double max_saccade = 0.0;
  for (const auto& s : p.saccades) max_saccade = std::max(max_saccade, std::abs(s.target_deg));
  max_yaw = (max_yaw + max_saccade + 5.0) * kDeg;

  for (int t = 0; t < p.frames; ++t) {
    CameraPose pose;
    const double lateral =
        p.sway_amplitude * std::sin(2.0 * std::numbers::pi * t / p.sway_period + p.sway_phase);
    pose.center = Eigen::Vector3d(lateral, 0.0, p.forward_speed * t);
    pose.yaw = yaw_at(p, t);
    seq.poses.push_back(pose);
    seq.head_offset.push_back(lateral);
  }

  // Points are spawned inside the (widened) view frustum of a camera placed
  // somewhere along the path, at a depth uniform in [depth_min, depth_max].
  std::mt19937_64 rng(p.seed);
  const double half_w = 0.5 * dims.width / f;
  const double half_h = 0.5 * dims.height / f;
  const double spread = std::tan(std::atan(half_w) + max_yaw);
  const double path_length = p.forward_speed * (p.frames - 1);
  const double span = path_length + p.depth_max;
  const auto count = static_cast<std::size_t>(
      std::ceil(p.points * (span / (p.depth_max - p.depth_min)) * (spread / half_w)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> channel(40, 255);
  seq.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double zc = -p.depth_max + span * unit(rng);
    const double d = p.depth_min + (p.depth_max - p.depth_min) * unit(rng);
    const double x = (2.0 * unit(rng) - 1.0) * spread * d;
    const double y = (2.0 * unit(rng) - 1.0) * half_h * d;
    ScenePoint sp;
    sp.position = Eigen::Vector3d(x, y, zc + d);
    sp.color = {static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
                static_cast<std::uint8_t>(channel(rng))};
    seq.points.push_back(sp);
  }

  // Flow at each anchor: back-project at a locally smoothed depth (inverse
  // depth averaged over nearby visible points) and re-project into t+1.
  const std::vector<Vec2> anchors = p.grid.anchors(dims);
  const Vec2 step = p.grid.spacing(dims);
  const double sigma = p.depth_smoothing * std::max(step.x(), step.y());
  const double radius2 = 9.0 * sigma * sigma;
  std::normal_distribution<double> noise(0.0, p.noise_sigma > 0 ? p.noise_sigma : 1.0);

  std::vector<Vec2> proj;
  std::vector<double> inv_depth;
  for (int t = 0; t + 1 < p.frames; ++t) {
    const CameraPose& a = seq.poses[static_cast<std::size_t>(t)];
    const CameraPose& b = seq.poses[static_cast<std::size_t>(t + 1)];
    const Eigen::Matrix3d Rt = a.rotation().transpose();
    proj.clear();
    inv_depth.clear();
    for (const auto& sp : seq.points) {
      const Eigen::Vector3d Xc = Rt * (sp.position - a.center);
      if (Xc.z() <= kNearPlane) continue;
      const Vec2 u(f * Xc.x() / Xc.z(), f * Xc.y() / Xc.z());
      if (std::abs(u.x()) > 0.5 * dims.width + 3 * sigma || std::abs(u.y()) > 0.5 * dims.height + 3 * sigma) {
        continue;
      }
      proj.push_back(u + center);
      inv_depth.push_back(1.0 / Xc.z());
    }

    FlowGrid g;
    g.t = t;
    g.points = anchors;
    g.vectors.assign(anchors.size(), Vec2::Zero());
    g.valid.assign(anchors.size(), 0);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      double wsum = 0.0, acc = 0.0;
      for (std::size_t q = 0; q < proj.size(); ++q) {
        const double d2 = (proj[q] - anchors[i]).squaredNorm();
        if (d2 > radius2) continue;
        const double w = std::exp(-0.5 * d2 / (sigma * sigma));
        wsum += w;
        acc += w * inv_depth[q];
      }
      if (wsum < 1e-3) continue;
      const double depth = wsum / acc;
      const Vec2 rel = (anchors[i] - center) / f;
      const Eigen::Vector3d X = a.rotation() * Eigen::Vector3d(rel.x() * depth, rel.y() * depth, depth) + a.center;
      const auto next = project_point(b, X, f);
      if (!next) continue;
      const Vec2 moved = *next + center;
      if (moved.x() < 0 || moved.y() < 0 || moved.x() > dims.width || moved.y() > dims.height) continue;
      g.vectors[i] = moved - anchors[i];
      g.valid[i] = 1;
    }
    if (p.noise_sigma > 0) {
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double nx = noise(rng), ny = noise(rng);
        if (g.valid[i]) g.vectors[i] += Vec2(nx, ny);
      }
    }
    seq.flows.push_back(std::move(g));
  }
  seq.sway = cumulative_x_shift(seq.flows);
  return seq;
}

DirectionTruth ground_truth_direction(std::span<const CameraPose> poses, int t, int k, ImageDims dims) {
  if (t < 0 || k < 1 || static_cast<std::size_t>(t + k) >= poses.size()) {
    throw InputError("ground_truth_direction: span outside the sequence");
  }
  const CameraPose& a = poses[static_cast<std::size_t>(t)];
  const CameraPose& b = poses[static_cast<std::size_t>(t + k)];
  const Eigen::Vector3d d = a.rotation().transpose() * (b.center - a.center);
  if (d.norm() < 1e-15) throw InputError("ground_truth_direction: zero translation");
  DirectionTruth truth;
  if (std::abs(d.z()) < 1e-12 * d.norm()) {
    truth.at_infinity = true;
    return truth;
  }
  const double f = dims.width;
  truth.point = Vec2(f * d.x() / d.z(), f * d.y() / d.z());
  return truth;
}

Eigen::Matrix3d fundamental_from_poses(const CameraPose& a, const CameraPose& b, double focal,
                                       ImageDims dims) {
  const Vec2 c = image_center(dims);
  Eigen::Matrix3d K;
  K << focal, 0, c.x(), 0, focal, c.y(), 0, 0, 1;
  const Eigen::Matrix3d R = b.rotation().transpose() * a.rotation();
  const Eigen::Vector3d tr = b.rotation().transpose() * (a.center - b.center);
  Eigen::Matrix3d tx;
  tx << 0, -tr.z(), tr.y(), tr.z(), 0, -tr.x(), -tr.y(), tr.x(), 0;
  const Eigen::Matrix3d Kinv = K.inverse();
  const Eigen::Matrix3d F = Kinv.transpose() * tx * R * Kinv;
  return F / F.norm();
}

Frame render_frame(const SyntheticSequence& seq, int t) {
  const ImageDims dims = seq.params.dims;
  const CameraPose& pose = seq.poses.at(static_cast<std::size_t>(t));
  const Vec2 center = image_center(dims);
  Frame frame(dims.width, dims.height, t);
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      std::uint8_t* px = frame.pixel(x, y);
      px[0] = static_cast<std::uint8_t>(50 + 60 * y / dims.height);
      px[1] = static_cast<std::uint8_t>(60 + 50 * x / dims.width);
      px[2] = 110;
    }
  }
  struct Splat {
    double depth;
    Vec2 at;
    std::size_t point;
  };
  std::vector<Splat> splats;
  const Eigen::Matrix3d Rt = pose.rotation().transpose();
  for (std::size_t i = 0; i < seq.points.size(); ++i) {
    const Eigen::Vector3d Xc = Rt * (seq.points[i].position - pose.center);
    if (Xc.z() <= kNearPlane) continue;
    const Vec2 u = Vec2(seq.focal() * Xc.x() / Xc.z(), seq.focal() * Xc.y() / Xc.z()) + center;
    if (u.x() < -2 || u.y() < -2 || u.x() > dims.width + 2 || u.y() > dims.height + 2) continue;
    splats.push_back({Xc.z(), u, i});
  }
  std::sort(splats.begin(), splats.end(), [](const Splat& a, const Splat& b) {
    return a.depth != b.depth ? a.depth > b.depth : a.point < b.point;
  });
  static constexpr double kShade[3][3] = {{0.5, 0.75, 0.5}, {0.75, 1.0, 0.75}, {0.5, 0.75, 0.5}};
  for (const auto& s : splats) {
    const int cx = static_cast<int>(std::floor(s.at.x()));
    const int cy = static_cast<int>(std::floor(s.at.y()));
    const auto& color = seq.points[s.point].color;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = cx + dx, y = cy + dy;
        if (x < 0 || y < 0 || x >= dims.width || y >= dims.height) continue;
        std::uint8_t* px = frame.pixel(x, y);
        for (int c = 0; c < 3; ++c) {
          px[c] = static_cast<std::uint8_t>(color[static_cast<std::size_t>(c)] * kShade[dy + 1][dx + 1]);
        }
      }
    }
  }
  return frame;
}

}  // namespace strideskip
