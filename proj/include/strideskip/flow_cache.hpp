#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "strideskip/flow.hpp"

namespace strideskip {

/// Line-delimited JSON: a header line, then one record per consecutive frame pair.
struct FlowCache {
  ImageDims dims;
  GridSpec grid;
  int first_frame = 0;  // stream index of frame t=0 in the records
  std::vector<FlowGrid> flows;

  int frames() const { return static_cast<int>(flows.size()) + 1; }
};

std::string encode_flow_cache(const FlowCache& cache);
FlowCache decode_flow_cache(const std::string& text, const std::string& name = "<memory>");

void write_flow_cache(const std::filesystem::path& path, const FlowCache& cache);
FlowCache read_flow_cache(const std::filesystem::path& path);

}  // namespace strideskip
