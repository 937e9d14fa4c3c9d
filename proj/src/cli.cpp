#include "strideskip/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "strideskip/errors.hpp"
#include "strideskip/pnm.hpp"
#include "strideskip/serialize.hpp"
#include "strideskip/stereo.hpp"

#include <json.hpp>

namespace strideskip {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCommands = {"fastforward", "stereo", "metrics", "synth", "render"};

struct KeySpec {
  const char* key;
  const char* help;
  bool flag = false;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"input", "frame directory, .y4m file"},
      {"out", "output directory"},
      {"plan", "plan JSON (render, metrics)"},
      {"mode", "epipolar | foe-only"},
      {"order", "first | second"},
      {"speedup", "target speedup multiplier"},
      {"kflow", "explicit K_flow in pixels (overrides speedup)"},
      {"tau", "maximum frame skip"},
      {"dstart", "start window"},
      {"dend", "end window"},
      {"alpha", "shakiness weight"},
      {"beta", "velocity weight"},
      {"gamma", "appearance weight"},
      {"cfoe", "FOE penalty multiplier"},
      {"eta", "second-order variation weight"},
      {"range", "frame range A:B"},
      {"flow-cache", "flow cache path (read if present, else written)"},
      {"direction-cache", "direction cache path (read if present, else written)"},
      {"importance", "per-frame penalty file"},
      {"bias-side", "incoming | outgoing"},
      {"seed", "random seed"},
      {"sequence-id", "id written to the metrics row"},
      {"grid-rows", "flow grid rows"},
      {"grid-cols", "flow grid columns"},
      {"analysis-size", "longest side used for tracking"},
      {"window", "sway smoothing window"},
      {"prominence", "sway peak prominence"},
      {"swap-eyes", "exchange left and right frames", true},
      {"side-by-side", "also write side-by-side PPMs", true},
      {"render", "write selected/synthetic frames", true},
      {"frames", "synth: frame count"},
      {"width", "synth: image width"},
      {"height", "synth: image height"},
      {"forward-speed", "synth: units per frame"},
      {"sway-amplitude", "synth: lateral sway, units"},
      {"sway-period", "synth: sway period, frames"},
      {"yaw-amplitude", "synth: yaw oscillation, degrees"},
      {"yaw-period", "synth: yaw period, frames"},
      {"saccade-every", "synth: frames between glances (0 = none)"},
      {"saccade-angle", "synth: glance angle, degrees"},
      {"saccade-duration", "synth: glance length, frames"},
      {"points", "synth: points in view"},
      {"noise", "synth: flow noise sigma, pixels"},
      {"gt-tau", "synth: largest k in ground-truth directions"},
  };
  return specs;
}

bool known_key(const std::string& k) {
  for (const auto& s : key_specs()) {
    if (k == s.key) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::map<std::string, std::string> out;
  const auto bytes = read_binary_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (!known_key(key)) throw InputError("unknown config key '" + key + "'");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(d)) {
    throw InputError("invalid value '" + v + "' for " + key + ": expected a number");
  }
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw InputError("invalid value '" + v + "' for " + key + ": expected an integer");
  return i;
}

int to_int(const std::string& key, const std::string& v) {
  const long long i = to_integer(key, v);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw InputError("value for " + key + " out of range");
  }
  return static_cast<int>(i);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("invalid value '" + v + "' for " + key + ": expected true or false");
}

RunConfig build_config(const std::string& command, const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  cfg.command = command;
  auto get = [&](const char* k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  // Keys are consumed in a fixed order so the mode picks the weight defaults first.
  DirectionMode mode = DirectionMode::epipolar;
  if (auto v = get("mode")) {
    try {
      mode = direction_mode_from_string(*v);
    } catch (const InputError&) {
      throw InputError("invalid value '" + *v + "' for mode: expected epipolar or foe-only");
    }
  }
  cfg.sampling = SamplingConfig::defaults(mode);
  if (auto v = get("order")) {
    try {
      cfg.sampling.order = graph_order_from_string(*v);
    } catch (const InputError&) {
      throw InputError("invalid value '" + *v + "' for order: expected first or second");
    }
  }
  if (auto v = get("input")) cfg.input = *v;
  if (auto v = get("out")) cfg.out = *v;
  if (auto v = get("plan")) cfg.plan = *v;
  if (auto v = get("speedup")) cfg.speedup = to_double("speedup", *v);
  if (auto v = get("kflow")) cfg.k_flow = to_double("kflow", *v);
  if (auto v = get("tau")) cfg.sampling.tau = to_int("tau", *v);
  if (auto v = get("dstart")) cfg.sampling.d_start = to_int("dstart", *v);
  if (auto v = get("dend")) cfg.sampling.d_end = to_int("dend", *v);
  if (auto v = get("alpha")) cfg.sampling.alpha = to_double("alpha", *v);
  if (auto v = get("beta")) cfg.sampling.beta = to_double("beta", *v);
  if (auto v = get("gamma")) cfg.sampling.gamma = to_double("gamma", *v);
  if (auto v = get("cfoe")) cfg.sampling.c_foe = to_double("cfoe", *v);
  if (auto v = get("eta")) cfg.sampling.eta = to_double("eta", *v);
  if (auto v = get("range")) {
    try {
      cfg.range = parse_frame_range(*v);
    } catch (const InputError& e) {
      throw InputError(std::string("invalid value for range: ") + e.what());
    }
  }
  if (auto v = get("flow-cache")) cfg.flow_cache = *v;
  if (auto v = get("direction-cache")) cfg.direction_cache = *v;
  if (auto v = get("importance")) cfg.importance = *v;
  if (auto v = get("bias-side")) {
    if (*v == "incoming") {
      cfg.bias_side = BiasSide::incoming;
    } else if (*v == "outgoing") {
      cfg.bias_side = BiasSide::outgoing;
    } else {
      throw InputError("invalid value '" + *v + "' for bias-side: expected incoming or outgoing");
    }
  }
  if (auto v = get("seed")) {
    const long long s = to_integer("seed", *v);
    if (s < 0) throw InputError("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("sequence-id")) cfg.sequence_id = *v;
  if (auto v = get("grid-rows")) cfg.flow.grid.rows = to_int("grid-rows", *v);
  if (auto v = get("grid-cols")) cfg.flow.grid.cols = to_int("grid-cols", *v);
  if (auto v = get("analysis-size")) cfg.flow.analysis_max_side = to_int("analysis-size", *v);
  if (auto v = get("window")) cfg.stereo_window = to_int("window", *v);
  if (auto v = get("prominence")) cfg.stereo_prominence = to_double("prominence", *v);
  if (auto v = get("swap-eyes")) cfg.swap_eyes = to_bool("swap-eyes", *v);
  if (auto v = get("side-by-side")) cfg.side_by_side = to_bool("side-by-side", *v);
  if (auto v = get("render")) cfg.render = to_bool("render", *v);

  SynthSettings& s = cfg.synth;
  WalkSceneParams& p = s.scene;
  if (auto v = get("frames")) p.frames = to_int("frames", *v);
  if (auto v = get("width")) p.dims.width = to_int("width", *v);
  if (auto v = get("height")) p.dims.height = to_int("height", *v);
  if (auto v = get("forward-speed")) p.forward_speed = to_double("forward-speed", *v);
  if (auto v = get("sway-amplitude")) p.sway_amplitude = to_double("sway-amplitude", *v);
  if (auto v = get("sway-period")) p.sway_period = to_double("sway-period", *v);
  if (auto v = get("yaw-amplitude")) p.yaw_amplitude_deg = to_double("yaw-amplitude", *v);
  if (auto v = get("yaw-period")) p.yaw_period = to_double("yaw-period", *v);
  if (auto v = get("saccade-every")) s.saccade_every = to_int("saccade-every", *v);
  if (auto v = get("saccade-angle")) s.saccade_angle = to_double("saccade-angle", *v);
  if (auto v = get("saccade-duration")) s.saccade_duration = to_int("saccade-duration", *v);
  if (auto v = get("points")) p.points = to_int("points", *v);
  if (auto v = get("noise")) p.noise_sigma = to_double("noise", *v);
  if (auto v = get("gt-tau")) s.gt_tau = to_int("gt-tau", *v);
  p.seed = cfg.seed;
  s.render = cfg.render;
  p.grid = cfg.flow.grid;

  cfg.sampling.validate();
  if (!(cfg.speedup >= 1.0)) throw InputError("speedup must be ≥ 1");
  if (cfg.k_flow && !(*cfg.k_flow > 0)) throw InputError("kflow must be > 0");
  cfg.flow.grid.validate();
  if (cfg.flow.analysis_max_side < 16) throw InputError("analysis-size must be >= 16");
  if (cfg.stereo_window < 1) throw InputError("window must be >= 1");
  if (!(cfg.stereo_prominence >= 0)) throw InputError("prominence must be >= 0");
  if (s.saccade_every < 0) throw InputError("saccade-every must be >= 0");
  if (s.gt_tau < 0) throw InputError("gt-tau must be >= 0");
  if (command == "synth") {
    if (s.saccade_every > 0) {
      p.saccades = periodic_saccades(p.frames, s.saccade_every, s.saccade_duration, s.saccade_angle,
                                     p.seed, s.saccade_every / 6);
    }
    p.validate();
  }
  return cfg;
}

// ---- commands ----

struct Loaded {
  SequenceAnalysis analysis;
  std::optional<FrameSource> frames;
};

bool exists(const std::string& p) { return !p.empty() && fs::exists(p); }

FlowCache slice_cache(FlowCache c, const FrameRange& r, const std::string& name) {
  const int first = c.first_frame, last = c.first_frame + c.frames() - 1;
  if (r.first < first || r.last > last) {
    throw InputError("range " + std::to_string(r.first) + ":" + std::to_string(r.last) +
                     " is outside the frames in " + name);
  }
  if (r.last - r.first < 1) throw InputError("range must cover at least 2 frames");
  std::vector<FlowGrid> flows(c.flows.begin() + (r.first - first), c.flows.begin() + (r.last - first));
  for (std::size_t i = 0; i < flows.size(); ++i) flows[i].t = static_cast<int>(i);
  c.flows = std::move(flows);
  c.first_frame = r.first;
  return c;
}

/// Frames and/or flow. With an existing flow cache the flow is read from it;
/// otherwise it is computed from --input and, if a cache path was given, saved.
Loaded load_sequence(const RunConfig& cfg, std::ostream& err, bool need_histograms) {
  Loaded l;
  if (!cfg.input.empty()) l.frames = FrameSource::open(cfg.input, cfg.range);
  if (exists(cfg.flow_cache)) {
    FlowCache c = read_flow_cache(cfg.flow_cache);
    if (cfg.range) c = slice_cache(std::move(c), *cfg.range, cfg.flow_cache);
    l.analysis = analysis_from_cache(c);
    if (l.frames) {
      if (l.frames->first_index() != l.analysis.first_frame || l.frames->size() != l.analysis.frames()) {
        throw InputError("flow cache " + cfg.flow_cache + " does not match the input frames");
      }
      if (need_histograms) {
        l.frames->rewind();
        while (auto f = l.frames->next()) l.analysis.histograms.push_back(color_histogram(*f));
      }
    }
    return l;
  }
  if (!l.frames) throw InputError("--input is required (or an existing --flow-cache)");
  l.analysis = analyze_frames(*l.frames, cfg.flow, need_histograms);
  if (!cfg.flow_cache.empty()) {
    write_flow_cache(cfg.flow_cache, to_flow_cache(l.analysis));
    err << "wrote flow cache " << cfg.flow_cache << "\n";
  }
  return l;
}

std::string sequence_id(const RunConfig& cfg) {
  if (!cfg.sequence_id.empty()) return cfg.sequence_id;
  const std::string src = !cfg.input.empty() ? cfg.input : cfg.flow_cache;
  fs::path p(src);
  if (p.filename().empty()) p = p.parent_path();
  return p.stem().string();
}

TransitionMeasurements measurements_for(const RunConfig& cfg, const SequenceAnalysis& a, std::ostream& err) {
  const SamplingConfig& sc = cfg.sampling;
  if (exists(cfg.direction_cache)) {
    const auto bytes = read_binary_file(cfg.direction_cache);
    const auto dirs = decode_direction_cache(std::string(bytes.begin(), bytes.end()), sc.mode, a.frames(),
                                             sc.tau, cfg.direction_cache);
    return measure_transitions(a, sc.tau, sc.mode, {}, &dirs);
  }
  TransitionMeasurements m = measure_transitions(a, sc.tau, sc.mode);
  if (!cfg.direction_cache.empty()) {
    write_file_atomic(cfg.direction_cache, encode_direction_cache(m, sc.mode));
    err << "wrote direction cache " << cfg.direction_cache << "\n";
  }
  return m;
}

std::vector<double> importance_for(const RunConfig& cfg, const SequenceAnalysis& a) {
  if (cfg.importance.empty()) return {};
  std::vector<double> d = read_importance(cfg.importance);
  const auto n = static_cast<std::size_t>(a.frames());
  const auto first = static_cast<std::size_t>(a.first_frame);
  if (d.size() == n) return d;
  if (first > 0 && d.size() >= first + n) {
    return std::vector<double>(d.begin() + static_cast<std::ptrdiff_t>(first),
                               d.begin() + static_cast<std::ptrdiff_t>(first + n));
  }
  throw InputError("importance file has " + std::to_string(d.size()) + " values; expected " + std::to_string(n));
}

void copy_frames(const FrameSource& src, const std::vector<int>& stream_frames, const fs::path& dir) {
  fs::create_directories(dir);
  char name[32];
  for (std::size_t k = 0; k < stream_frames.size(); ++k) {
    std::snprintf(name, sizeof name, "out_%06zu.ppm", k);
    write_ppm(dir / name, src.read(stream_frames[k]));
  }
}

int cmd_fastforward(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Loaded l = load_sequence(cfg, err, true);
  const SequenceAnalysis& a = l.analysis;
  const TransitionMeasurements m = measurements_for(cfg, a, err);
  FastForwardOptions opt;
  opt.config = cfg.sampling;
  opt.speedup = cfg.speedup;
  if (cfg.k_flow) {
    opt.config.k_flow = *cfg.k_flow;
    opt.explicit_k_flow = true;
  }
  opt.importance = importance_for(cfg, a);
  opt.bias_side = cfg.bias_side;
  opt.sequence_id = sequence_id(cfg);
  const FastForwardResult r = plan_fast_forward(a, m, opt);

  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "plan.json", plan_to_json(r.plan, a.frames(), a.first_frame, r.speedup));
  write_file_atomic(dir / "metrics.csv", metrics_csv_header() + metrics_csv_row(r.metrics));
  if (cfg.render) {
    if (!l.frames) throw InputError("--render needs --input frames");
    std::vector<int> stream;
    for (int f : r.plan.frames) stream.push_back(f + a.first_frame);
    copy_frames(*l.frames, stream, dir / "frames");
  }
  out << "selected " << r.plan.frames.size() << " of " << a.frames() << " frames, median skip "
      << r.metrics.median_skip << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "jitter %.3f, uniform %.3f, improvement (paper-style) %.1f%%\n", r.metrics.jitter,
                r.metrics.baseline_jitter, r.metrics.improvement_pct);
  out << line;
  return 0;
}

std::vector<int> read_plan_frames(const std::string& path) {
  if (path.empty()) throw InputError("--plan is required");
  const auto bytes = read_binary_file(path);
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    auto frames = j.at("frames").get<std::vector<int>>();
    if (frames.empty()) throw InputError(path + ": plan has no frames");
    for (std::size_t k = 1; k < frames.size(); ++k) {
      if (frames[k] <= frames[k - 1]) throw InputError(path + ": plan frames must be increasing");
    }
    return frames;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.input.empty()) throw InputError("--input is required");
  const FrameSource src = FrameSource::open(cfg.input, cfg.range);
  const std::vector<int> frames = read_plan_frames(cfg.plan);
  for (int f : frames) {
    if (f < src.first_index() || f > src.last_index()) {
      throw InputError("plan frame " + std::to_string(f) + " is not in the input");
    }
  }
  copy_frames(src, frames, cfg.out);
  out << "wrote " << frames.size() << " frames\n";
  return 0;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Loaded l = load_sequence(cfg, err, false);
  const SequenceAnalysis& a = l.analysis;
  std::vector<int> plan = read_plan_frames(cfg.plan);
  for (int& f : plan) {
    f -= a.first_frame;
    if (f < 0 || f >= a.frames()) throw InputError("plan frame outside the analysed frames");
  }
  const TransitionMeasurements m = measurements_for(cfg, a, err);
  const int factor = std::max(1, static_cast<int>(std::lround(cfg.speedup)));
  const std::vector<int> baseline = uniform_plan(a.frames(), factor);
  std::vector<MotionDirection> pd, bd;
  for (std::size_t k = 0; k + 1 < plan.size(); ++k) {
    pd.push_back(lookup_direction(a, m, plan[k], plan[k + 1], cfg.sampling.mode));
  }
  for (std::size_t k = 0; k + 1 < baseline.size(); ++k) {
    bd.push_back(lookup_direction(a, m, baseline[k], baseline[k + 1], cfg.sampling.mode));
  }
  PlanMetrics pm = evaluate_plan(plan, pd, baseline, bd, a.frames());
  pm.sequence_id = sequence_id(cfg);
  pm.mode = to_string(cfg.sampling.mode);
  pm.order = to_string(cfg.sampling.order);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  const std::string csv = metrics_csv_header() + metrics_csv_row(pm);
  write_file_atomic(dir / "metrics.csv", csv);
  out << csv;
  return 0;
}

int cmd_stereo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Loaded l = load_sequence(cfg, err, false);
  const SequenceAnalysis& a = l.analysis;
  const SwayCurve sway = cumulative_x_shift(a.flows);
  const SwayExtrema ex = detect_sway_extrema(sway, cfg.stereo_window, cfg.stereo_prominence);
  StereoPairs pairs = pair_stereo_frames(ex);
  if (cfg.swap_eyes) pairs = swap_eyes(std::move(pairs));
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "pairs.json", pairs_to_json(ex, pairs, a.first_frame, cfg.swap_eyes));
  if (pairs.pairs.empty()) {
    err << "warning: no stereo pairs found (no sway extrema)\n";
  } else if (!l.frames) {
    err << "warning: no --input frames; anaglyphs not written\n";
  } else {
    std::vector<Frame> composed(pairs.pairs.size()), sbs(cfg.side_by_side ? pairs.pairs.size() : 0);
    const FrameSource& src = *l.frames;
    parallel_for(0, static_cast<int>(pairs.pairs.size()), [&](int k) {
      const auto& p = pairs.pairs[static_cast<std::size_t>(k)];
      const Frame left = src.read(p.left + a.first_frame), right = src.read(p.right + a.first_frame);
      composed[static_cast<std::size_t>(k)] = compose_anaglyph(left, right);
      if (cfg.side_by_side) sbs[static_cast<std::size_t>(k)] = compose_side_by_side(left, right);
    });
    for (std::size_t k = 0; k < composed.size(); ++k) {
      const auto& p = pairs.pairs[k];
      const std::string stem = std::to_string(k) + "_" + std::to_string(p.left + a.first_frame) + "_" +
                               std::to_string(p.right + a.first_frame) + ".ppm";
      write_ppm(dir / ("anaglyph_" + stem), composed[k]);
      if (cfg.side_by_side) write_ppm(dir / ("sbs_" + stem), sbs[k]);
    }
  }
  out << pairs.pairs.size() << " stereo pairs\n";
  return 0;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const SyntheticSequence seq = generate_walk_scene(cfg.synth.scene);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  FlowCache cache;
  cache.dims = seq.params.dims;
  cache.grid = seq.params.grid;
  cache.flows = seq.flows;
  write_flow_cache(dir / "flows.jsonl", cache);
  write_file_atomic(dir / "ground_truth.json", ground_truth_to_json(seq, cfg.synth.gt_tau));
  if (cfg.synth.render) {
    const fs::path frames = dir / "frames";
    fs::create_directories(frames);
    char name[32];
    for (int t = 0; t < seq.frame_count(); ++t) {
      std::snprintf(name, sizeof name, "frame_%06d.ppm", t);
      write_ppm(frames / name, render_frame(seq, t));
    }
  }
  out << "generated " << seq.frame_count() << " frames\n";
  return 0;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw InputError("missing command (fastforward | stereo | metrics | synth | render)");
  const std::string command = args.front();
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw InputError("unknown command '" + command + "'");
  }
  CLI::App app{"strideskip " + command};
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, bool> flags;
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");
  for (const auto& spec : key_specs()) {
    const std::string name = std::string("--") + spec.key;
    if (spec.flag) {
      options[spec.key] = app.add_flag(name, flags[spec.key], spec.help);
    } else {
      options[spec.key] = app.add_option(name, values[spec.key], spec.help);
    }
  }
  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }
  std::map<std::string, std::string> merged;
  if (!config_path.empty()) merged = read_config_file(config_path);
  for (const auto& spec : key_specs()) {
    if (options[spec.key]->count() == 0) continue;
    merged[spec.key] = spec.flag ? (flags[spec.key] ? "true" : "false") : values[spec.key];
  }
  return build_config(command, merged);
}

static void print_usage(std::ostream& out) {
  out << "usage: strideskip <fastforward|stereo|metrics|synth|render> [--key value ...] [--config FILE]\n";
  for (const auto& spec : key_specs()) out << "  --" << spec.key << "  " << spec.help << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
    print_usage(out);
    return 0;
  }
  try {
    const RunConfig cfg = parse_config(args);
    if (cfg.command == "fastforward") return cmd_fastforward(cfg, out, err);
    if (cfg.command == "render") return cmd_render(cfg, out, err);
    if (cfg.command == "metrics") return cmd_metrics(cfg, out, err);
    if (cfg.command == "stereo") return cmd_stereo(cfg, out, err);
    return cmd_synth(cfg, out, err);
  } catch (const CLI::CallForHelp&) {
    print_usage(out);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace strideskip
