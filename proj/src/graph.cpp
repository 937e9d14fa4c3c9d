#include "strideskip/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "strideskip/errors.hpp"

namespace strideskip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_feasible_shape(int n, const SamplingConfig& config) {
  if (n <= config.d_start + config.d_end) {
    throw InfeasibleError("no feasible path: " + std::to_string(n) + " frames with dstart=" +
                          std::to_string(config.d_start) + " and dend=" + std::to_string(config.d_end));
  }
}

void check_delta(std::span<const double> delta, int n) {
  if (static_cast<int>(delta.size()) != n) throw InputError("importance list length must equal frame count");
  for (double d : delta) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InputError("importance penalties must be finite and >= 0");
  }
}

}  // namespace

std::size_t FirstOrderGraph::edge_count() const {
  std::size_t count = 0;
  for (int i = 0; i < n; ++i) count += static_cast<std::size_t>(std::min(tau, n - 1 - i));
  return count;
}

FirstOrderGraph build_first_order_graph(int n, const CostTable& costs, const SamplingConfig& config) {
  config.validate();
  check_feasible_shape(n, config);
  if (costs.frames() != n || costs.tau() < config.tau) {
    throw InputError("cost table does not cover the requested graph");
  }
  FirstOrderGraph g;
  g.n = n;
  g.tau = config.tau;
  g.d_start = config.d_start;
  g.d_end = config.d_end;
  g.weights.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(g.tau), kInf);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + g.tau); ++j) {
      const double w = costs.at(i, j).W;
      if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("edge weights must be finite and >= 0");
      g.weight(i, j) = w;
    }
  }
  g.source_weights.assign(static_cast<std::size_t>(n), 0.0);
  g.sink_weights.assign(static_cast<std::size_t>(n), 0.0);
  return g;
}

FirstOrderGraph apply_importance_bias(FirstOrderGraph g, std::span<const double> delta, BiasSide side) {
  check_delta(delta, g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j <= std::min(g.n - 1, i + g.tau); ++j) {
      g.weight(i, j) += delta[static_cast<std::size_t>(side == BiasSide::incoming ? j : i)];
    }
  }
  auto& endpoint = side == BiasSide::incoming ? g.source_weights : g.sink_weights;
  for (int i = 0; i < g.n; ++i) endpoint[static_cast<std::size_t>(i)] += delta[static_cast<std::size_t>(i)];
  return g;
}

PathSolution shortest_path(const FirstOrderGraph& g) {
  const int n = g.n;
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<int> pred(static_cast<std::size_t>(n), -2);  // -1 = source
  for (int j = 0; j < n; ++j) {
    double best = kInf;
    int best_pred = -2;
    if (g.connects_source(j)) {
      best = g.source_weights[static_cast<std::size_t>(j)];
      best_pred = -1;
    }
    for (int i = std::max(0, j - g.tau); i < j; ++i) {
      const double d = dist[static_cast<std::size_t>(i)];
      if (d == kInf) continue;
      const double cand = d + g.weight(i, j);
      if (cand < best) {
        best = cand;
        best_pred = i;
      }
    }
    dist[static_cast<std::size_t>(j)] = best;
    pred[static_cast<std::size_t>(j)] = best_pred;
  }
  double best = kInf;
  int last = -1;
  for (int i = std::max(0, n - 1 - g.d_end); i < n; ++i) {
    const double cand = dist[static_cast<std::size_t>(i)] + g.sink_weights[static_cast<std::size_t>(i)];
    if (cand < best) {
      best = cand;
      last = i;
    }
  }
  if (last < 0) throw InfeasibleError("no source-to-sink path in first-order graph");
  PathSolution sol;
  sol.total_cost = best;
  for (int f = last; f >= 0; f = pred[static_cast<std::size_t>(f)]) sol.frames.push_back(f);
  std::reverse(sol.frames.begin(), sol.frames.end());
  return sol;
}

// ---------------------------------------------------------------------------

std::size_t SecondOrderGraph::node_count() const {
  std::size_t count = 0;
  for (int i = 0; i < n_; ++i) count += static_cast<std::size_t>(std::max(0, std::min(tau_, n_ - 1 - i)));
  return count;
}

std::size_t SecondOrderGraph::edge_count() const {
  std::size_t count = 0;
  for (int j = 0; j < n_; ++j) {
    const auto ending = static_cast<std::size_t>(std::min(tau_, j));
    const auto starting = static_cast<std::size_t>(std::max(0, std::min(tau_, n_ - 1 - j)));
    count += ending * starting;
  }
  return count;
}

double SecondOrderGraph::edge_weight(int i, int j, int l) const {
  const std::size_t a = slot(i, j), b = slot(j, l);
  double w;
  if (kind_[a] == 0 || kind_[b] == 0) {
    w = unavailable_[b];
  } else {
    const double factor = (kind_[a] == 2 || kind_[b] == 2) ? c_foe_ : 1.0;
    w = entry_[b] + variation_scale_ * factor * (point_[b] - point_[a]).norm();
  }
  return w + out_bias_[a] + in_bias_[b];
}

double SecondOrderGraph::source_weight(int i, int j) const {
  const std::size_t s = slot(i, j);
  return first_order_[s] + source_extra_[s] + in_bias_[s];
}

double SecondOrderGraph::sink_weight(int i, int j) const {
  const std::size_t s = slot(i, j);
  return sink_extra_[s] + out_bias_[s];
}

SecondOrderGraph build_second_order_graph(int n, const CostTable& costs, const SamplingConfig& config) {
  config.validate();
  check_feasible_shape(n, config);
  if (costs.frames() != n || costs.tau() < config.tau) {
    throw InputError("cost table does not cover the requested graph");
  }
  SecondOrderGraph g;
  g.n_ = n;
  g.tau_ = config.tau;
  g.d_start_ = config.d_start;
  g.d_end_ = config.d_end;
  const std::size_t slots = static_cast<std::size_t>(n) * static_cast<std::size_t>(config.tau);
  g.point_.assign(slots, Vec2::Zero());
  g.kind_.assign(slots, 0);
  g.entry_.assign(slots, kInf);
  g.unavailable_.assign(slots, kInf);
  g.first_order_.assign(slots, kInf);
  g.in_bias_.assign(slots, 0.0);
  g.out_bias_.assign(slots, 0.0);
  g.source_extra_.assign(slots, 0.0);
  g.sink_extra_.assign(slots, 0.0);
  const double half_diag = costs.dims().half_diagonal();
  if (!(half_diag > 0)) throw InputError("cost table has no image dimensions");
  g.variation_scale_ = config.alpha * config.eta / half_diag;
  g.c_foe_ = config.c_foe;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + config.tau); ++j) {
      const TransitionCosts& tc = costs.at(i, j);
      const std::size_t s = g.slot(i, j);
      const double rest = config.beta * tc.V + config.gamma * tc.C;
      if (!(tc.W >= 0.0) || !std::isfinite(tc.W) || !(rest >= 0.0) || !std::isfinite(rest)) {
        throw InputError("edge weights must be finite and >= 0");
      }
      g.first_order_[s] = tc.W;
      g.unavailable_[s] = config.alpha * kUnavailableCost + rest;
      if (tc.direction.available()) {
        g.kind_[s] = tc.direction.source == DirectionSource::foe ? 2 : 1;
        g.point_[s] = tc.direction.point;
        const double factor = g.kind_[s] == 2 ? config.c_foe : 1.0;
        g.entry_[s] = config.alpha * factor * tc.direction.point.norm() / half_diag + rest;
      }
    }
  }
  return g;
}

SecondOrderGraph apply_importance_bias(SecondOrderGraph g, std::span<const double> delta, BiasSide side) {
  const bool outgoing = side == BiasSide::outgoing;
  check_delta(delta, g.n_);
  for (int i = 0; i < g.n_; ++i) {
    for (int j = i + 1; j <= std::min(g.n_ - 1, i + g.tau_); ++j) {
      const std::size_t s = g.slot(i, j);
      const double di = delta[static_cast<std::size_t>(i)], dj = delta[static_cast<std::size_t>(j)];
      if (outgoing) {
        g.out_bias_[s] += di;
        g.sink_extra_[s] += dj;
      } else {
        g.in_bias_[s] += dj;
        g.source_extra_[s] += di;
      }
    }
  }
  return g;
}

PathSolution shortest_path(const SecondOrderGraph& g) {
  const int n = g.n_, tau = g.tau_;
  const std::size_t slots = static_cast<std::size_t>(n) * static_cast<std::size_t>(tau);
  std::vector<double> dist(slots, kInf);
  std::vector<std::int32_t> pred(slots, -2);  // predecessor's first frame; -1 = source

  for (int i = 0; i < n; ++i) {
    const int h_lo = std::max(0, i - tau);
    for (int j = i + 1; j <= std::min(n - 1, i + tau); ++j) {
      const std::size_t s = g.slot(i, j);
      double best = kInf;
      std::int32_t best_pred = -2;
      if (g.connects_source(i)) {
        best = g.source_weight(i, j);
        best_pred = -1;
      }
      for (int h = h_lo; h < i; ++h) {
        const double d = dist[g.slot(h, i)];
        if (d == kInf) continue;
        const double cand = d + g.edge_weight(h, i, j);
        if (cand < best) {
          best = cand;
          best_pred = h;
        }
      }
      dist[s] = best;
      pred[s] = best_pred;
    }
  }

  double best = kInf;
  int best_i = -1, best_j = -1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + tau); ++j) {
      if (!g.connects_sink(j)) continue;
      const double cand = dist[g.slot(i, j)] + g.sink_weight(i, j);
      if (cand < best) {
        best = cand;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best_i < 0) throw InfeasibleError("no source-to-sink path in second-order graph");

  PathSolution sol;
  sol.total_cost = best;
  sol.frames.push_back(best_j);
  int i = best_i, j = best_j;
  while (true) {
    sol.frames.push_back(i);
    const int h = pred[g.slot(i, j)];
    if (h < 0) break;
    j = i;
    i = h;
  }
  std::reverse(sol.frames.begin(), sol.frames.end());
  return sol;
}

SamplePlan make_plan(const PathSolution& path, const CostTable& costs, const SamplingConfig& config) {
  SamplePlan plan;
  plan.frames = path.frames;
  plan.total_cost = path.total_cost;
  plan.config = config;
  for (std::size_t k = 0; k + 1 < path.frames.size(); ++k) {
    plan.transitions.push_back(costs.at(path.frames[k], path.frames[k + 1]));
  }
  return plan;
}

void check_plan(const SamplePlan& plan, int n) {
  const auto& f = plan.frames;
  if (f.empty()) throw std::logic_error("plan is empty");
  if (f.front() > plan.config.d_start) throw std::logic_error("plan starts after d_start");
  if (f.back() < n - 1 - plan.config.d_end) throw std::logic_error("plan ends before n-1-d_end");
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const int gap = f[k + 1] - f[k];
    if (gap < 1 || gap > plan.config.tau) throw std::logic_error("plan gap out of [1, tau]");
  }
}

}  // namespace strideskip
