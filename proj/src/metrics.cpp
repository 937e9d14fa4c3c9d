#include "strideskip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "strideskip/errors.hpp"

namespace strideskip {

std::vector<int> uniform_plan(int n, int factor) {
  if (factor < 1) throw InputError("uniform sampling factor must be >= 1");
  std::vector<int> frames;
  for (int f = 0; f < n; f += factor) frames.push_back(f);
  return frames;
}

int median_skip(std::span<const int> frames) {
  if (frames.size() < 2) throw InputError("median skip needs at least 2 frames");
  std::vector<int> gaps;
  gaps.reserve(frames.size() - 1);
  for (std::size_t i = 1; i < frames.size(); ++i) gaps.push_back(frames[i] - frames[i - 1]);
  const std::size_t mid = (gaps.size() - 1) / 2;
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(mid), gaps.end());
  return gaps[mid];
}

JitterResult epipole_jitter(std::span<const int> frames, std::span<const MotionDirection> directions) {
  if (frames.size() >= 1 && directions.size() != frames.size() - 1) {
    throw InputError("epipole_jitter: need one direction per output transition");
  }
  JitterResult r;
  std::vector<Vec2> points;
  for (const auto& d : directions) {
    if (d.available()) {
      points.push_back(d.point);
    } else {
      ++r.unavailable_transitions;
    }
  }
  if (points.size() < 2) throw InputError("epipole_jitter: fewer than 2 available directions");
  double sum = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) sum += (points[i] - points[i - 1]).norm();
  r.jitter = sum / static_cast<double>(points.size() - 1);
  return r;
}

double jitter_improvement(double plan_jitter, double baseline_jitter) {
  if (!(baseline_jitter > 0.0)) throw InputError("jitter improvement needs a positive baseline");
  if (plan_jitter <= 0.0) return std::numeric_limits<double>::infinity();
  return 100.0 * (baseline_jitter - plan_jitter) / plan_jitter;
}

std::string metrics_csv_header() {
  return "sequence_id,mode,order,input_frames,output_frames,median_skip,jitter,baseline_jitter,"
         "improvement_pct,unavailable_transition_count\n";
}

std::string metrics_csv_row(const PlanMetrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%d,%d,%.6f,%.6f,%.3f,%d\n", m.sequence_id.c_str(),
                m.mode.c_str(), m.order.c_str(), m.input_frames, m.output_frames, m.median_skip,
                m.jitter, m.baseline_jitter, m.improvement_pct, m.unavailable_transitions);
  return buf;
}

}  // namespace strideskip
