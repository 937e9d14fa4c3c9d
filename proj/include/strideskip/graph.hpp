#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "strideskip/costs.hpp"

namespace strideskip {

enum class BiasSide { incoming, outgoing };

/// Frames on the optimal source-to-sink path and its total weight.
struct PathSolution {
  std::vector<int> frames;
  double total_cost = 0.0;
};

/// Node per frame, edge i->j for 1 <= j-i <= tau, plus a virtual source
/// feeding frames 0..d_start and a sink fed by frames n-1-d_end..n-1.
struct FirstOrderGraph {
  int n = 0;
  int tau = 0;
  int d_start = 0;
  int d_end = 0;
  std::vector<double> weights;         // slot i*tau + (j-i-1)
  std::vector<double> source_weights;  // per frame; only frames <= d_start are connected
  std::vector<double> sink_weights;    // per frame; only frames >= n-1-d_end are connected

  bool has_edge(int i, int j) const { return i >= 0 && j < n && j > i && j - i <= tau; }
  double weight(int i, int j) const {
    return weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(tau) + static_cast<std::size_t>(j - i - 1)];
  }
  double& weight(int i, int j) {
    return weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(tau) + static_cast<std::size_t>(j - i - 1)];
  }
  bool connects_source(int j) const { return j <= d_start; }
  bool connects_sink(int i) const { return i >= n - 1 - d_end; }
  /// Frame-to-frame edges, excluding source/sink edges.
  std::size_t edge_count() const;
};

FirstOrderGraph build_first_order_graph(int n, const CostTable& costs, const SamplingConfig& config);

/// Node per transition (i,j); edge (i,j)->(j,l) charges the transition to l
/// with shakiness that also penalizes the change of motion direction.
/// Edge weights are evaluated on demand from per-node data.
class SecondOrderGraph {
 public:
  int frames() const { return n_; }
  int tau() const { return tau_; }
  int d_start() const { return d_start_; }
  int d_end() const { return d_end_; }

  bool has_node(int i, int j) const { return i >= 0 && j < n_ && j > i && j - i <= tau_; }
  std::size_t node_count() const;
  std::size_t edge_count() const;

  /// Weight of edge (i,j)->(j,l), biases included.
  double edge_weight(int i, int j, int l) const;
  double source_weight(int i, int j) const;
  double sink_weight(int i, int j) const;
  bool connects_source(int i) const { return i <= d_start_; }
  bool connects_sink(int j) const { return j >= n_ - 1 - d_end_; }

 private:
  friend SecondOrderGraph build_second_order_graph(int, const CostTable&, const SamplingConfig&);
  friend SecondOrderGraph apply_importance_bias(SecondOrderGraph, std::span<const double>, BiasSide);
  friend PathSolution shortest_path(const SecondOrderGraph&);

  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(tau_) + static_cast<std::size_t>(j - i - 1);
  }

  int n_ = 0;
  int tau_ = 0;
  int d_start_ = 0;
  int d_end_ = 0;
  // Per node (i,j):
  std::vector<Vec2> point_;
  std::vector<std::uint8_t> kind_;      // 0 unavailable, 1 epipole, 2 foe
  std::vector<double> entry_;           // alpha*origin term + beta*V + gamma*C of (i,j)
  std::vector<double> unavailable_;     // alpha*sentinel + beta*V + gamma*C of (i,j)
  std::vector<double> first_order_;     // first-order weight W of (i,j)
  std::vector<double> in_bias_;
  std::vector<double> out_bias_;
  std::vector<double> source_extra_;
  std::vector<double> sink_extra_;
  double variation_scale_ = 0.0;        // alpha*eta/half_diagonal
  double c_foe_ = 1.0;
};

SecondOrderGraph build_second_order_graph(int n, const CostTable& costs, const SamplingConfig& config);

/// Adds delta[i] to every incoming (or outgoing) edge of frame i, so each
/// frame on a path is charged exactly once.
FirstOrderGraph apply_importance_bias(FirstOrderGraph g, std::span<const double> delta,
                                      BiasSide side = BiasSide::incoming);
/// Second order: incoming edges of pair-nodes (h,i) carry delta[i], and the
/// source edge into (h,i) also carries delta[h]; outgoing mirrors this.
SecondOrderGraph apply_importance_bias(SecondOrderGraph g, std::span<const double> delta,
                                       BiasSide side = BiasSide::incoming);

/// Dynamic programming in frame order. Ties prefer the smaller predecessor index.
/// Throws InfeasibleError when no path exists.
PathSolution shortest_path(const FirstOrderGraph& g);
PathSolution shortest_path(const SecondOrderGraph& g);

/// Selected frames with per-transition diagnostics and the config that produced them.
struct SamplePlan {
  std::vector<int> frames;
  double total_cost = 0.0;
  std::vector<TransitionCosts> transitions;
  SamplingConfig config;
};

/// Attaches the cost-table entries along a solved path.
SamplePlan make_plan(const PathSolution& path, const CostTable& costs, const SamplingConfig& config);

/// Throws std::logic_error if gaps or endpoints violate the config bounds for n frames.
void check_plan(const SamplePlan& plan, int n);

}  // namespace strideskip
