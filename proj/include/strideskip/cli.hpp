#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strideskip/costs.hpp"
#include "strideskip/frame_source.hpp"
#include "strideskip/graph.hpp"
#include "strideskip/pipeline.hpp"
#include "strideskip/synth.hpp"

namespace strideskip {

struct SynthSettings {
  WalkSceneParams scene;
  int saccade_every = 0;  // 0 disables generated saccades
  int saccade_duration = 16;
  double saccade_angle = 20.0;
  bool render = false;
  int gt_tau = 10;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string out = ".";
  std::string plan;  // existing plan JSON for `render` and `metrics`
  SamplingConfig sampling;
  double speedup = 10.0;
  std::optional<double> k_flow;
  FlowSettings flow;
  int stereo_window = 5;
  double stereo_prominence = 1.0;
  bool swap_eyes = false;
  bool side_by_side = false;
  bool render = false;
  std::optional<FrameRange> range;
  std::string flow_cache;
  std::string direction_cache;
  std::string importance;
  BiasSide bias_side = BiasSide::incoming;
  std::uint64_t seed = 1;
  std::string sequence_id;
  SynthSettings synth;
};

/// Parses `command [flags]`. Flags override `--config FILE` entries (flat
/// key=value, keys named like the long flags) which override defaults.
/// Throws InputError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs a command. Returns 0 on success, 2 on bad input, 3 when no plan is
/// feasible, 4 on internal errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strideskip
