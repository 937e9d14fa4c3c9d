#include "strideskip/flow_cache.hpp"

#include <json.hpp>
#include <sstream>

#include "strideskip/errors.hpp"
#include "strideskip/pnm.hpp"

namespace strideskip {

using nlohmann::json;

std::string encode_flow_cache(const FlowCache& cache) {
  std::string out;
  json header = json::object();
  header["type"] = "header";
  header["width"] = cache.dims.width;
  header["height"] = cache.dims.height;
  header["frames"] = cache.frames();
  header["first"] = cache.first_frame;
  header["grid"] = {{"rows", cache.grid.rows}, {"cols", cache.grid.cols}, {"margin", cache.grid.margin}};
  out += header.dump() + "\n";
  for (const auto& g : cache.flows) {
    json rec = json::object();
    rec["t"] = g.t;
    json pts = json::array(), vecs = json::array(), valid = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
      pts.push_back({g.points[i].x(), g.points[i].y()});
      vecs.push_back({g.vectors[i].x(), g.vectors[i].y()});
      valid.push_back(static_cast<int>(g.valid[i]));
    }
    rec["points"] = std::move(pts);
    rec["vectors"] = std::move(vecs);
    rec["valid"] = std::move(valid);
    out += rec.dump() + "\n";
  }
  return out;
}

FlowCache decode_flow_cache(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  FlowCache cache;
  bool have_header = false;
  int declared_frames = -1;
  auto fail = [&](const std::string& why) {
    throw InputError(name + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("type", "") != "header") fail("first line must be the flow-cache header");
        cache.dims = {j.at("width").get<int>(), j.at("height").get<int>()};
        cache.first_frame = j.value("first", 0);
        declared_frames = j.value("frames", -1);
        const auto& gj = j.at("grid");
        cache.grid.rows = gj.at("rows").get<int>();
        cache.grid.cols = gj.at("cols").get<int>();
        cache.grid.margin = gj.at("margin").get<double>();
        cache.grid.validate();
        if (cache.dims.width < 1 || cache.dims.height < 1) fail("bad image size");
        have_header = true;
        continue;
      }
      FlowGrid g;
      g.t = j.at("t").get<int>();
      if (g.t != static_cast<int>(cache.flows.size())) fail("records must have consecutive t from 0");
      const auto& pts = j.at("points");
      const auto& vecs = j.at("vectors");
      const auto& valid = j.at("valid");
      const auto n = static_cast<std::size_t>(cache.grid.size());
      if (pts.size() != n || vecs.size() != n || valid.size() != n) fail("record size does not match grid");
      for (std::size_t i = 0; i < n; ++i) {
        g.points.emplace_back(pts[i].at(0).get<double>(), pts[i].at(1).get<double>());
        g.vectors.emplace_back(vecs[i].at(0).get<double>(), vecs[i].at(1).get<double>());
        const int v = valid[i].get<int>();
        if (v != 0 && v != 1) fail("valid mask entries must be 0 or 1");
        g.valid.push_back(static_cast<std::uint8_t>(v));
      }
      cache.flows.push_back(std::move(g));
    } catch (const json::exception& e) {
      fail(std::string("bad field: ") + e.what());
    }
  }
  if (!have_header) throw InputError(name + ": empty flow cache");
  if (cache.flows.empty()) throw InputError(name + ": flow cache has no records");
  if (declared_frames >= 0 && declared_frames != cache.frames()) {
    throw InputError(name + ": header declares " + std::to_string(declared_frames) + " frames but records cover " +
                     std::to_string(cache.frames()));
  }
  return cache;
}

void write_flow_cache(const std::filesystem::path& path, const FlowCache& cache) {
  write_file_atomic(path, encode_flow_cache(cache));
}

FlowCache read_flow_cache(const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path);
  return decode_flow_cache(std::string(bytes.begin(), bytes.end()), path.string());
}

}  // namespace strideskip
