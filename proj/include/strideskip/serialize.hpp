#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "strideskip/costs.hpp"
#include "strideskip/graph.hpp"
#include "strideskip/stereo.hpp"
#include "strideskip/synth.hpp"

namespace strideskip {

/// Plan JSON. Frame numbers are shifted by `first_frame` to stream indices.
std::string plan_to_json(const SamplePlan& plan, int input_frames, int first_frame, double speedup);

std::string pairs_to_json(const SwayExtrema& extrema, const StereoPairs& pairs, int first_frame,
                          bool swapped);

/// Line-delimited JSON: header {mode, frames, tau}, then (t, k, source, x, y) records.
std::string encode_direction_cache(const TransitionMeasurements& m, DirectionMode mode);
/// Returns directions in TransitionMeasurements slot layout; throws InputError
/// if the header does not match (mode, frames, tau).
std::vector<MotionDirection> decode_direction_cache(const std::string& text, DirectionMode mode,
                                                    int frames, int tau,
                                                    const std::string& name = "<memory>");

/// Poses, lateral head offsets, sway curve and directions for k <= max_k.
std::string ground_truth_to_json(const SyntheticSequence& seq, int max_k);

/// Reads a per-frame importance list: one non-negative number per line.
std::vector<double> read_importance(const std::filesystem::path& path);

}  // namespace strideskip
