#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strideskip/costs.hpp"
#include "strideskip/flow.hpp"
#include "strideskip/flow_cache.hpp"
#include "strideskip/frame_source.hpp"
#include "strideskip/graph.hpp"
#include "strideskip/metrics.hpp"

namespace strideskip {

/// Runs fn(i) for i in [begin, end) on up to `threads` workers (0 = hardware).
void parallel_for(int begin, int end, const std::function<void(int)>& fn, int threads = 0);

struct FlowSettings {
  GridSpec grid;
  LkParams lk;
  int analysis_max_side = 640;  // frames are downscaled to this before tracking
};

/// Flow (and optionally histograms) for a sequence; frame 0 is stream index first_frame.
struct SequenceAnalysis {
  ImageDims dims;
  GridSpec grid;
  int first_frame = 0;
  std::vector<FlowGrid> flows;
  std::vector<Histogram> histograms;  // empty in flow-injection mode

  int frames() const { return static_cast<int>(flows.size()) + 1; }
  const std::vector<Histogram>* histogram_ptr() const {
    return histograms.empty() ? nullptr : &histograms;
  }
};

/// Tracks the grid through every consecutive pair; vectors are in source pixels.
SequenceAnalysis analyze_frames(FrameSource& source, const FlowSettings& settings,
                                bool with_histograms = true);

SequenceAnalysis analysis_from_cache(const FlowCache& cache);
FlowCache to_flow_cache(const SequenceAnalysis& a);

/// Directions and summed-flow magnitudes for every (t, t+k), k <= tau.
/// With `known`, directions are taken from it (same layout) and only magnitudes are measured.
TransitionMeasurements measure_transitions(const SequenceAnalysis& a, int tau, DirectionMode mode,
                                           const RansacParams& ransac = {},
                                           const std::vector<MotionDirection>* known = nullptr);

/// speedup times the sequence-average per-frame flow magnitude.
double k_flow_for_speedup(std::span<const FlowGrid> flows, double speedup);

/// Builds the graph for config.order, applies the optional per-frame bias and solves.
SamplePlan solve_plan(const CostTable& costs, const SamplingConfig& config,
                      std::span<const double> importance = {}, BiasSide side = BiasSide::incoming);

/// Direction for (i, j): from the table when j-i <= tau, else estimated directly.
MotionDirection lookup_direction(const SequenceAnalysis& a, const TransitionMeasurements& m, int i,
                                 int j, DirectionMode mode);

struct FastForwardOptions {
  SamplingConfig config;
  double speedup = 10.0;
  bool explicit_k_flow = false;  // use config.k_flow as given
  std::vector<double> importance;
  BiasSide bias_side = BiasSide::incoming;
  std::string sequence_id = "sequence";
};

struct FastForwardResult {
  SamplePlan plan;  // frame numbers are analysis indices (0-based within the range)
  double speedup = 10.0;
  std::vector<int> baseline_frames;
  std::vector<MotionDirection> plan_directions;
  std::vector<MotionDirection> baseline_directions;
  PlanMetrics metrics;
};

/// Jitter metrics for a plan against the uniform baseline; NaN when undefined.
PlanMetrics evaluate_plan(std::span<const int> plan, std::span<const MotionDirection> plan_dirs,
                          std::span<const int> baseline,
                          std::span<const MotionDirection> baseline_dirs, int input_frames);

FastForwardResult plan_fast_forward(const SequenceAnalysis& a, const TransitionMeasurements& m,
                                    const FastForwardOptions& options);

}  // namespace strideskip
