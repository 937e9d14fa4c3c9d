#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "strideskip/epipolar.hpp"
#include "strideskip/image.hpp"

namespace strideskip {

enum class GraphOrder { first, second };

const char* to_string(GraphOrder o);
GraphOrder graph_order_from_string(const std::string& s);

/// Cost assigned when a direction or flow magnitude could not be measured.
inline constexpr double kUnavailableCost = 10.0;

struct SamplingConfig {
  double alpha = 1000.0;
  double beta = 200.0;
  double gamma = 3.0;
  double c_foe = 4.0;   // multiplier on shakiness terms measured from the FOE
  int tau = 100;        // maximum frame skip
  int d_start = 120;
  int d_end = 120;
  double k_flow = 1.0;  // target accumulated flow magnitude per output transition, pixels
  double eta = 1.0;     // weight of the direction-variation term (second order)
  DirectionMode mode = DirectionMode::epipolar;
  GraphOrder order = GraphOrder::first;

  /// Weights used in the evaluation setup for each direction mode.
  static SamplingConfig defaults(DirectionMode mode);
  /// Throws InputError naming the offending field.
  void validate() const;
};

struct Histogram {
  static constexpr int kBins = 32;
  std::array<std::array<double, kBins>, 3> channels{};
};

Histogram color_histogram(const Frame& f);

/// Mean over channels of the 1-D earth mover's distance, normalized to [0,1].
double appearance_cost(const Histogram& a, const Histogram& b);

double shakiness_cost(const MotionDirection& d, ImageDims dims, const SamplingConfig& config);
double velocity_cost(std::optional<double> magnitude, const SamplingConfig& config);
double edge_weight(double S, double V, double C, const SamplingConfig& config);

/// Distance from center plus eta times the change from the previous
/// transition's direction, both in half-diagonal units.
double second_order_shakiness(const MotionDirection& prev, const MotionDirection& next,
                              ImageDims dims, const SamplingConfig& config);

struct TransitionCosts {
  int i = 0;
  int j = 0;
  double S = 0.0;
  double V = 0.0;
  double C = 0.0;
  double W = 0.0;
  MotionDirection direction;
};

/// Raw per-transition measurements for every (i, i+k), 1 <= k <= tau.
struct TransitionMeasurements {
  int n = 0;
  int tau = 0;
  std::vector<MotionDirection> directions;        // n*tau, slot i*tau + k-1
  std::vector<std::optional<double>> magnitudes;  // mean |summed flow|, same layout

  TransitionMeasurements() = default;
  TransitionMeasurements(int frames, int max_skip);
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(tau) + static_cast<std::size_t>(j - i - 1);
  }
  bool has(int i, int j) const { return i >= 0 && j < n && j > i && j - i <= tau; }
};

/// Dense table of transition costs. Read-only once built.
class CostTable {
 public:
  CostTable() = default;
  CostTable(int n, int tau);

  static CostTable compute(const TransitionMeasurements& m,
                           const std::vector<Histogram>* histograms, ImageDims dims,
                           const SamplingConfig& config);

  int frames() const { return n_; }
  int tau() const { return tau_; }
  bool has(int i, int j) const { return i >= 0 && j < n_ && j > i && j - i <= tau_; }
  const TransitionCosts& at(int i, int j) const { return entries_[slot(i, j)]; }
  TransitionCosts& at(int i, int j) { return entries_[slot(i, j)]; }
  ImageDims dims() const { return dims_; }
  void set_dims(ImageDims d) { dims_ = d; }

 private:
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(tau_) + static_cast<std::size_t>(j - i - 1);
  }
  int n_ = 0;
  int tau_ = 0;
  ImageDims dims_{};
  std::vector<TransitionCosts> entries_;
};

}  // namespace strideskip
