#include "strideskip/flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "strideskip/errors.hpp"

namespace strideskip {

void GridSpec::validate() const {
  if (rows < 2 || cols < 2) throw InputError("grid needs at least 2 rows and 2 columns");
  if (margin < 0.0 || margin >= 0.25) throw InputError("grid margin must be in [0, 0.25)");
}

Vec2 GridSpec::spacing(ImageDims dims) const {
  const double usable = 1.0 - 2.0 * margin;
  return {dims.width * usable / cols, dims.height * usable / rows};
}

Vec2 GridSpec::origin(ImageDims dims) const {
  const Vec2 step = spacing(dims);
  return {dims.width * margin + 0.5 * step.x(), dims.height * margin + 0.5 * step.y()};
}

std::vector<Vec2> GridSpec::anchors(ImageDims dims) const {
  const Vec2 step = spacing(dims);
  const Vec2 o = origin(dims);
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(size()));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) pts.emplace_back(o.x() + c * step.x(), o.y() + r * step.y());
  }
  return pts;
}

std::size_t FlowGrid::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid) n += v ? 1 : 0;
  return n;
}

namespace {

struct Window {
  std::vector<float> values;
  std::vector<float> gx;
  std::vector<float> gy;
};

// Samples the template window and its central-difference gradients around an
// array-coordinate position.
Window sample_window(const GrayFrame& img, double cx, double cy, int half) {
  Window w;
  const int side = 2 * half + 1;
  w.values.resize(static_cast<std::size_t>(side) * side);
  w.gx.resize(w.values.size());
  w.gy.resize(w.values.size());
  std::size_t i = 0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx, ++i) {
      const double x = cx + dx, y = cy + dy;
      w.values[i] = img.sample(x, y);
      w.gx[i] = 0.5f * (img.sample(x + 1, y) - img.sample(x - 1, y));
      w.gy[i] = 0.5f * (img.sample(x, y + 1) - img.sample(x, y - 1));
    }
  }
  return w;
}

}  // namespace

FlowGrid sparse_lk_flow(const Pyramid& prev, const Pyramid& next, const GridSpec& grid,
                        const LkParams& params, int t) {
  if (prev.level_count() == 0 || next.level_count() == 0 ||
      prev.base().width != next.base().width || prev.base().height != next.base().height) {
    throw InputError("sparse_lk_flow: pyramid size mismatch");
  }
  const int levels = std::min({params.levels, prev.level_count(), next.level_count()});
  const int half = params.window / 2;
  const ImageDims dims{prev.base().width, prev.base().height};

  FlowGrid out;
  out.t = t;
  out.points = grid.anchors(dims);
  out.vectors.assign(out.points.size(), Vec2::Zero());
  out.valid.assign(out.points.size(), 1);

  for (std::size_t p = 0; p < out.points.size(); ++p) {
    Vec2 guess = Vec2::Zero();  // displacement at the current level
    bool ok = true;
    for (int level = levels - 1; level >= 0 && ok; --level) {
      const GrayFrame& I = prev.levels[static_cast<std::size_t>(level)];
      const GrayFrame& J = next.levels[static_cast<std::size_t>(level)];
      const double scale = std::ldexp(1.0, -level);
      const double px = out.points[p].x() * scale - 0.5;
      const double py = out.points[p].y() * scale - 0.5;

      const Window w = sample_window(I, px, py, half);
      double gxx = 0, gxy = 0, gyy = 0;
      for (std::size_t i = 0; i < w.values.size(); ++i) {
        gxx += double(w.gx[i]) * w.gx[i];
        gxy += double(w.gx[i]) * w.gy[i];
        gyy += double(w.gy[i]) * w.gy[i];
      }
      const double trace = gxx + gyy;
      const double det = gxx * gyy - gxy * gxy;
      const double min_eig = 0.5 * (trace - std::sqrt(std::max(0.0, trace * trace - 4.0 * det)));
      const double flat_floor = 1e-8 * static_cast<double>(w.values.size());
      if (trace <= flat_floor || min_eig < params.min_eigen_ratio * trace) {
        if (level == 0) ok = false;
        if (level > 0) guess *= 2.0;
        continue;
      }

      Vec2 delta = Vec2::Zero();
      for (int iter = 0; iter < params.max_iterations; ++iter) {
        const double qx = px + guess.x() + delta.x();
        const double qy = py + guess.y() + delta.y();
        if (qx < -half || qy < -half || qx > J.width - 1 + half || qy > J.height - 1 + half) {
          ok = false;
          break;
        }
        double bx = 0, by = 0;
        std::size_t i = 0;
        for (int dy = -half; dy <= half; ++dy) {
          for (int dx = -half; dx <= half; ++dx, ++i) {
            const double diff = w.values[i] - J.sample(qx + dx, qy + dy);
            bx += diff * w.gx[i];
            by += diff * w.gy[i];
          }
        }
        const Vec2 step((gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det);
        delta += step;
        if (step.norm() < params.epsilon) break;
      }
      if (!ok) break;
      guess += delta;
      if (level > 0) guess *= 2.0;
    }
    if (ok) {
      const double qx = out.points[p].x() + guess.x();
      const double qy = out.points[p].y() + guess.y();
      ok = qx >= 0 && qy >= 0 && qx <= dims.width && qy <= dims.height && std::isfinite(qx) &&
           std::isfinite(qy);
    }
    out.valid[p] = ok ? 1 : 0;
    out.vectors[p] = ok ? guess : Vec2::Zero();
  }
  return out;
}

void FlowAccumulator::add(const FlowGrid& g) {
  if (count_ == 0) {
    points_ = g.points;
    sums_.assign(g.size(), Vec2::Zero());
    alive_.assign(g.size(), 1);
    first_ = g.t;
  } else {
    if (g.t != first_ + count_) {
      throw InputError("integrate_flow: expected frame " + std::to_string(first_ + count_) +
                       ", got " + std::to_string(g.t));
    }
    if (g.size() != points_.size()) throw InputError("integrate_flow: grid size changed");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.valid[i]) alive_[i] = 0;
    sums_[i] += g.vectors[i];
  }
  ++count_;
}

IntegratedFlow FlowAccumulator::result(Aggregate kind) const {
  IntegratedFlow out;
  out.kind = kind;
  out.first = first_;
  out.last = first_ + count_;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!alive_[i]) continue;
    out.points.push_back(points_[i]);
    out.vectors.push_back(kind == Aggregate::sum ? sums_[i] : Vec2(sums_[i] / count_));
  }
  return out;
}

IntegratedFlow integrate_flow(std::span<const FlowGrid> flows, Aggregate kind) {
  if (flows.empty()) throw InputError("integrate_flow: empty flow list");
  FlowAccumulator acc;
  for (const auto& g : flows) acc.add(g);
  return acc.result(kind);
}

std::optional<double> mean_flow_magnitude(const IntegratedFlow& g) {
  if (g.vectors.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& v : g.vectors) sum += v.norm();
  return sum / static_cast<double>(g.vectors.size());
}

FlowStatistics sequence_flow_statistics(std::span<const FlowGrid> flows) {
  FlowStatistics stats;
  double total = 0.0;
  int counted = 0;
  for (const auto& g : flows) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.valid[i]) continue;
      sum += g.vectors[i].norm();
      ++n;
    }
    if (n == 0) {
      stats.per_frame.push_back(std::nullopt);
      continue;
    }
    stats.per_frame.push_back(sum / n);
    total += sum / n;
    ++counted;
  }
  stats.global_average = counted ? total / counted : 0.0;
  return stats;
}

SwayCurve cumulative_x_shift(std::span<const FlowGrid> flows) {
  SwayCurve curve;
  curve.values.reserve(flows.size() + 1);
  curve.values.push_back(0.0);
  for (const auto& g : flows) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.valid[i]) continue;
      sum += g.vectors[i].x();
      ++n;
    }
    curve.values.push_back(curve.values.back() + (n ? sum / n : 0.0));
  }
  return curve;
}

}  // namespace strideskip
