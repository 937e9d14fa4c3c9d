#pragma once

#include <span>
#include <string>
#include <vector>

#include "strideskip/epipolar.hpp"

namespace strideskip {

/// Every `factor`-th frame starting at 0.
std::vector<int> uniform_plan(int n, int factor);

/// Median of consecutive index gaps (lower middle for an even count).
int median_skip(std::span<const int> frames);

struct JitterResult {
  double jitter = 0.0;           // mean |change| of direction between output transitions
  int unavailable_transitions = 0;
};

/// Mean magnitude of the temporal derivative of the motion direction along
/// the output. `directions[k]` belongs to transition frames[k] -> frames[k+1];
/// unavailable ones are skipped and counted.
JitterResult epipole_jitter(std::span<const int> frames, std::span<const MotionDirection> directions);

/// Improvement relative to the plan's own jitter: 100*(baseline-plan)/plan.
double jitter_improvement(double plan_jitter, double baseline_jitter);

struct PlanMetrics {
  std::string sequence_id;
  std::string mode;
  std::string order;
  int input_frames = 0;
  int output_frames = 0;
  int median_skip = 0;
  double jitter = 0.0;
  double baseline_jitter = 0.0;
  double improvement_pct = 0.0;
  int unavailable_transitions = 0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const PlanMetrics& m);

}  // namespace strideskip
