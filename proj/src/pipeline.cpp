#include "strideskip/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "strideskip/errors.hpp"

namespace strideskip {

void parallel_for(int begin, int end, const std::function<void(int)>& fn, int threads) {
  if (end <= begin) return;
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, end - begin);
  if (threads == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<int> next{begin};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i = next++; i < end && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SequenceAnalysis analyze_frames(FrameSource& source, const FlowSettings& settings, bool with_histograms) {
  settings.grid.validate();
  if (source.size() < 2) throw InputError("need at least 2 frames");
  SequenceAnalysis a;
  a.grid = settings.grid;
  a.first_frame = source.first_index();
  source.rewind();

  std::optional<Pyramid> prev;
  int t = 0;
  while (auto frame = source.next()) {
    if (!prev) {
      a.dims = frame->dims();
    } else if (frame->dims() != a.dims) {
      throw InputError("frame " + std::to_string(frame->index) + " changes the frame size");
    }
    if (with_histograms) a.histograms.push_back(color_histogram(*frame));
    ScaledGray scaled = downscale_to_fit(to_grayscale(*frame), settings.analysis_max_side);
    Pyramid pyr = build_pyramid(scaled.image, settings.lk.levels);
    if (prev) {
      FlowGrid g = sparse_lk_flow(*prev, pyr, settings.grid, settings.lk, t);
      // Back to source pixel units; anchors land on the source-resolution lattice.
      g.points = settings.grid.anchors(a.dims);
      for (auto& v : g.vectors) {
        v.x() /= scaled.scale_x;
        v.y() /= scaled.scale_y;
      }
      a.flows.push_back(std::move(g));
      ++t;
    }
    prev = std::move(pyr);
  }
  return a;
}

SequenceAnalysis analysis_from_cache(const FlowCache& cache) {
  SequenceAnalysis a;
  a.dims = cache.dims;
  a.grid = cache.grid;
  a.first_frame = cache.first_frame;
  a.flows = cache.flows;
  return a;
}

FlowCache to_flow_cache(const SequenceAnalysis& a) {
  FlowCache c;
  c.dims = a.dims;
  c.grid = a.grid;
  c.first_frame = a.first_frame;
  c.flows = a.flows;
  return c;
}

TransitionMeasurements measure_transitions(const SequenceAnalysis& a, int tau, DirectionMode mode,
                                           const RansacParams& ransac,
                                           const std::vector<MotionDirection>* known) {
  if (tau < 1) throw InputError("tau must be ≥ 1");
  const int n = a.frames();
  TransitionMeasurements m(n, tau);
  if (known) {
    if (known->size() != m.directions.size()) throw InputError("direction cache does not match the sequence");
    m.directions = *known;
  }
  const bool chain = !known && mode == DirectionMode::epipolar;
  parallel_for(0, n - 1, [&](int t) {
    FlowAccumulator acc;
    CorrespondenceChainer chainer(a.grid, a.dims);
    for (int k = 1; k <= tau && t + k < n; ++k) {
      const FlowGrid& g = a.flows[static_cast<std::size_t>(t + k - 1)];
      acc.add(g);
      if (chain) {
        if (k == 1) {
          chainer.start(g);
        } else {
          chainer.advance(g);
        }
      }
      const std::size_t s = m.slot(t, t + k);
      m.magnitudes[s] = mean_flow_magnitude(acc.result(Aggregate::sum));
      if (known) continue;
      const Correspondences chains = chain ? chainer.current() : Correspondences{};
      m.directions[s] = resolve_direction(chains, acc.result(Aggregate::mean), a.dims, mode, ransac, t, k);
    }
  });
  return m;
}

double k_flow_for_speedup(std::span<const FlowGrid> flows, double speedup) {
  const FlowStatistics stats = sequence_flow_statistics(flows);
  if (!(stats.global_average > 0)) throw InputError("no valid flow measured; cannot derive K_flow");
  return speedup * stats.global_average;
}

SamplePlan solve_plan(const CostTable& costs, const SamplingConfig& config,
                      std::span<const double> importance, BiasSide side) {
  const int n = costs.frames();
  if (!importance.empty() && static_cast<int>(importance.size()) != n) {
    throw InputError("importance list has " + std::to_string(importance.size()) + " values for " +
                     std::to_string(n) + " frames");
  }
  PathSolution path;
  if (config.order == GraphOrder::first) {
    FirstOrderGraph g = build_first_order_graph(n, costs, config);
    if (!importance.empty()) g = apply_importance_bias(std::move(g), importance, side);
    path = shortest_path(g);
  } else {
    SecondOrderGraph g = build_second_order_graph(n, costs, config);
    if (!importance.empty()) g = apply_importance_bias(std::move(g), importance, side);
    path = shortest_path(g);
  }
  return make_plan(path, costs, config);
}

MotionDirection lookup_direction(const SequenceAnalysis& a, const TransitionMeasurements& m, int i,
                                 int j, DirectionMode mode) {
  if (m.has(i, j)) return m.directions[m.slot(i, j)];
  return motion_direction(i, j - i, a.flows, a.grid, a.dims, mode);
}

PlanMetrics evaluate_plan(std::span<const int> plan, std::span<const MotionDirection> plan_dirs,
                          std::span<const int> baseline,
                          std::span<const MotionDirection> baseline_dirs, int input_frames) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  PlanMetrics pm;
  pm.input_frames = input_frames;
  pm.output_frames = static_cast<int>(plan.size());
  pm.median_skip = plan.size() >= 2 ? median_skip(plan) : 0;
  pm.jitter = nan;
  pm.baseline_jitter = nan;
  pm.improvement_pct = nan;
  try {
    const JitterResult r = epipole_jitter(plan, plan_dirs);
    pm.jitter = r.jitter;
    pm.unavailable_transitions = r.unavailable_transitions;
  } catch (const InputError&) {
    pm.unavailable_transitions = static_cast<int>(
        std::count_if(plan_dirs.begin(), plan_dirs.end(), [](const auto& d) { return !d.available(); }));
  }
  try {
    pm.baseline_jitter = epipole_jitter(baseline, baseline_dirs).jitter;
  } catch (const InputError&) {
  }
  if (std::isfinite(pm.jitter) && std::isfinite(pm.baseline_jitter) && pm.baseline_jitter > 0) {
    pm.improvement_pct = jitter_improvement(pm.jitter, pm.baseline_jitter);
  }
  return pm;
}

FastForwardResult plan_fast_forward(const SequenceAnalysis& a, const TransitionMeasurements& m,
                                    const FastForwardOptions& options) {
  if (!(options.speedup >= 1.0)) throw InputError("speedup must be ≥ 1");
  SamplingConfig config = options.config;
  if (!options.explicit_k_flow) config.k_flow = k_flow_for_speedup(a.flows, options.speedup);
  config.validate();
  const int n = a.frames();
  if (m.n != n || m.tau != config.tau) throw InputError("measurements do not match the sequence or tau");

  const CostTable costs = CostTable::compute(m, a.histogram_ptr(), a.dims, config);
  FastForwardResult r;
  r.speedup = options.speedup;
  r.plan = solve_plan(costs, config, options.importance, options.bias_side);
  check_plan(r.plan, n);

  const int factor = std::max(1, static_cast<int>(std::lround(options.speedup)));
  r.baseline_frames = uniform_plan(n, factor);
  for (std::size_t k = 0; k + 1 < r.plan.frames.size(); ++k) {
    r.plan_directions.push_back(r.plan.transitions[k].direction);
  }
  for (std::size_t k = 0; k + 1 < r.baseline_frames.size(); ++k) {
    r.baseline_directions.push_back(
        lookup_direction(a, m, r.baseline_frames[k], r.baseline_frames[k + 1], config.mode));
  }
  r.metrics = evaluate_plan(r.plan.frames, r.plan_directions, r.baseline_frames,
                            r.baseline_directions, n);
  r.metrics.sequence_id = options.sequence_id;
  r.metrics.mode = to_string(config.mode);
  r.metrics.order = to_string(config.order);
  return r;
}

}  // namespace strideskip
