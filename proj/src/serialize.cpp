#include "strideskip/serialize.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "strideskip/errors.hpp"
#include "strideskip/pnm.hpp"

namespace strideskip {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson config_json(const SamplingConfig& c) {
  ojson j;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  j["c_foe"] = c.c_foe;
  j["eta"] = c.eta;
  j["tau"] = c.tau;
  j["d_start"] = c.d_start;
  j["d_end"] = c.d_end;
  j["k_flow"] = c.k_flow;
  j["mode"] = to_string(c.mode);
  j["order"] = to_string(c.order);
  return j;
}

}  // namespace

std::string plan_to_json(const SamplePlan& plan, int input_frames, int first_frame, double speedup) {
  ojson j;
  j["input_frames"] = input_frames;
  j["first_frame"] = first_frame;
  j["speedup"] = speedup;
  j["k_flow"] = plan.config.k_flow;
  j["config"] = config_json(plan.config);
  ojson frames = ojson::array();
  for (int f : plan.frames) frames.push_back(f + first_frame);
  j["frames"] = std::move(frames);
  j["total_cost"] = plan.total_cost;
  ojson tr = ojson::array();
  for (const auto& t : plan.transitions) {
    ojson e;
    e["i"] = t.i + first_frame;
    e["j"] = t.j + first_frame;
    e["S"] = t.S;
    e["V"] = t.V;
    e["C"] = t.C;
    e["W"] = t.W;
    e["source"] = to_string(t.direction.source);
    e["x"] = t.direction.available() ? ojson(t.direction.point.x()) : ojson(nullptr);
    e["y"] = t.direction.available() ? ojson(t.direction.point.y()) : ojson(nullptr);
    tr.push_back(std::move(e));
  }
  j["transitions"] = std::move(tr);
  return j.dump(2) + "\n";
}

std::string pairs_to_json(const SwayExtrema& extrema, const StereoPairs& pairs, int first_frame,
                          bool swapped) {
  ojson j;
  j["window"] = extrema.window;
  j["prominence"] = extrema.prominence;
  j["swapped"] = swapped;
  auto shifted = [&](const std::vector<int>& v) {
    ojson a = ojson::array();
    for (int f : v) a.push_back(f + first_frame);
    return a;
  };
  j["left_peaks"] = shifted(extrema.left_peaks);
  j["right_peaks"] = shifted(extrema.right_peaks);
  ojson p = ojson::array();
  for (const auto& s : pairs.pairs) {
    ojson e;
    e["left"] = s.left + first_frame;
    e["right"] = s.right + first_frame;
    p.push_back(std::move(e));
  }
  j["pairs"] = std::move(p);
  return j.dump(2) + "\n";
}

std::string encode_direction_cache(const TransitionMeasurements& m, DirectionMode mode) {
  std::string out;
  ojson h;
  h["type"] = "header";
  h["mode"] = to_string(mode);
  h["frames"] = m.n;
  h["tau"] = m.tau;
  out += h.dump() + "\n";
  for (int t = 0; t < m.n; ++t) {
    for (int k = 1; k <= m.tau && t + k < m.n; ++k) {
      const MotionDirection& d = m.directions[m.slot(t, t + k)];
      ojson r;
      r["t"] = t;
      r["k"] = k;
      r["source"] = to_string(d.source);
      r["x"] = d.available() ? ojson(d.point.x()) : ojson(nullptr);
      r["y"] = d.available() ? ojson(d.point.y()) : ojson(nullptr);
      out += r.dump() + "\n";
    }
  }
  return out;
}

std::vector<MotionDirection> decode_direction_cache(const std::string& text, DirectionMode mode,
                                                    int frames, int tau, const std::string& name) {
  TransitionMeasurements layout(frames, tau);
  std::vector<MotionDirection> dirs(layout.directions.size());
  std::vector<std::uint8_t> seen(dirs.size(), 0);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  auto fail = [&](const std::string& why) {
    throw InputError(name + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("type", "") != "header") fail("first line must be the direction-cache header");
        if (direction_mode_from_string(j.at("mode").get<std::string>()) != mode) fail("cache mode differs from --mode");
        if (j.at("frames").get<int>() != frames) fail("cache frame count differs from the input");
        if (j.at("tau").get<int>() != tau) fail("cache tau differs from --tau");
        have_header = true;
        continue;
      }
      const int t = j.at("t").get<int>(), k = j.at("k").get<int>();
      if (!layout.has(t, t + k)) fail("record (t,k) outside the sequence");
      MotionDirection d;
      d.first = t;
      d.last = t + k;
      d.source = direction_source_from_string(j.at("source").get<std::string>());
      if (d.available()) d.point = Vec2(j.at("x").get<double>(), j.at("y").get<double>());
      const std::size_t s = layout.slot(t, t + k);
      if (seen[s]) fail("duplicate record");
      seen[s] = 1;
      dirs[s] = d;
    } catch (const json::exception& e) {
      fail(std::string("malformed record: ") + e.what());
    }
  }
  if (!have_header) throw InputError(name + ": empty direction cache");
  for (int t = 0; t < frames; ++t) {
    for (int k = 1; k <= tau && t + k < frames; ++k) {
      if (!seen[layout.slot(t, t + k)]) {
        throw InputError(name + ": missing record t=" + std::to_string(t) + " k=" + std::to_string(k));
      }
    }
  }
  return dirs;
}

std::string ground_truth_to_json(const SyntheticSequence& seq, int max_k) {
  ojson j;
  j["width"] = seq.params.dims.width;
  j["height"] = seq.params.dims.height;
  j["focal"] = seq.focal();
  j["frames"] = seq.frame_count();
  ojson poses = ojson::array();
  for (std::size_t t = 0; t < seq.poses.size(); ++t) {
    const auto& p = seq.poses[t];
    ojson e;
    e["t"] = static_cast<int>(t);
    e["center"] = {p.center.x(), p.center.y(), p.center.z()};
    e["yaw"] = p.yaw;
    poses.push_back(std::move(e));
  }
  j["poses"] = std::move(poses);
  j["head_offset"] = seq.head_offset;
  j["sway"] = seq.sway.values;
  ojson dirs = ojson::array();
  for (int t = 0; t < seq.frame_count(); ++t) {
    for (int k = 1; k <= max_k && t + k < seq.frame_count(); ++k) {
      ojson e;
      e["t"] = t;
      e["k"] = k;
      try {
        const DirectionTruth d = ground_truth_direction(seq.poses, t, k, seq.params.dims);
        e["at_infinity"] = d.at_infinity;
        e["x"] = d.at_infinity ? ojson(nullptr) : number_or_null(d.point.x());
        e["y"] = d.at_infinity ? ojson(nullptr) : number_or_null(d.point.y());
      } catch (const InputError&) {
        e["at_infinity"] = true;
        e["x"] = nullptr;
        e["y"] = nullptr;
      }
      dirs.push_back(std::move(e));
    }
  }
  j["directions"] = std::move(dirs);
  return j.dump() + "\n";
}

std::vector<double> read_importance(const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v) || v < 0) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": importance must be a finite number >= 0");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace strideskip
