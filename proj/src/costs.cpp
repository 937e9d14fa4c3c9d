#include "strideskip/costs.hpp"

#include <cmath>
#include <string>

#include "strideskip/errors.hpp"

namespace strideskip {

const char* to_string(GraphOrder o) { return o == GraphOrder::first ? "first" : "second"; }

GraphOrder graph_order_from_string(const std::string& s) {
  if (s == "first") return GraphOrder::first;
  if (s == "second") return GraphOrder::second;
  throw InputError("order must be first or second, got '" + s + "'");
}

SamplingConfig SamplingConfig::defaults(DirectionMode mode) {
  SamplingConfig c;
  c.mode = mode;
  if (mode == DirectionMode::foe_only) {
    c.alpha = 3.0;
    c.beta = 10.0;
  }
  return c;
}

void SamplingConfig::validate() const {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + " must be >= 0");
  };
  non_negative(alpha, "alpha");
  non_negative(beta, "beta");
  non_negative(gamma, "gamma");
  non_negative(c_foe, "cfoe");
  non_negative(eta, "eta");
  if (tau < 1) throw InputError("tau must be ≥ 1");
  if (d_start < 0) throw InputError("dstart must be ≥ 0");
  if (d_end < 0) throw InputError("dend must be ≥ 0");
  if (!(k_flow > 0.0) || !std::isfinite(k_flow)) throw InputError("kflow must be > 0");
}

Histogram color_histogram(const Frame& f) {
  Histogram h;
  const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const int bin = f.data[i * 3 + static_cast<std::size_t>(c)] * Histogram::kBins / 256;
      h.channels[static_cast<std::size_t>(c)][static_cast<std::size_t>(bin)] += 1.0;
    }
  }
  if (n == 0) return h;
  for (auto& ch : h.channels) {
    for (auto& b : ch) b /= static_cast<double>(n);
  }
  return h;
}

double appearance_cost(const Histogram& a, const Histogram& b) {
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    double cdf_a = 0.0, cdf_b = 0.0, emd = 0.0;
    for (std::size_t k = 0; k < Histogram::kBins; ++k) {
      cdf_a += a.channels[c][k];
      cdf_b += b.channels[c][k];
      emd += std::abs(cdf_a - cdf_b);
    }
    total += emd / (Histogram::kBins - 1);
  }
  return total / 3.0;
}

namespace {

double direction_factor(const MotionDirection& d, const SamplingConfig& config) {
  return d.source == DirectionSource::foe ? config.c_foe : 1.0;
}

}  // namespace

double shakiness_cost(const MotionDirection& d, ImageDims dims, const SamplingConfig& config) {
  if (!d.available()) return kUnavailableCost;
  return direction_factor(d, config) * d.point.norm() / dims.half_diagonal();
}

double velocity_cost(std::optional<double> magnitude, const SamplingConfig& config) {
  if (!magnitude) return kUnavailableCost;
  return std::abs(*magnitude - config.k_flow) / config.k_flow;
}

double edge_weight(double S, double V, double C, const SamplingConfig& config) {
  return config.alpha * S + config.beta * V + config.gamma * C;
}

double second_order_shakiness(const MotionDirection& prev, const MotionDirection& next,
                              ImageDims dims, const SamplingConfig& config) {
  if (!prev.available() || !next.available()) return kUnavailableCost;
  const double variation_factor =
      (prev.source == DirectionSource::foe || next.source == DirectionSource::foe) ? config.c_foe : 1.0;
  const double origin_term = direction_factor(next, config) * next.point.norm();
  const double variation_term = config.eta * variation_factor * (next.point - prev.point).norm();
  return (origin_term + variation_term) / dims.half_diagonal();
}

TransitionMeasurements::TransitionMeasurements(int frames, int max_skip)
    : n(frames),
      tau(max_skip),
      directions(static_cast<std::size_t>(frames) * static_cast<std::size_t>(max_skip)),
      magnitudes(directions.size()) {}

CostTable::CostTable(int n, int tau)
    : n_(n), tau_(tau), entries_(static_cast<std::size_t>(n) * static_cast<std::size_t>(tau)) {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + tau); ++j) {
      at(i, j).i = i;
      at(i, j).j = j;
    }
  }
}

CostTable CostTable::compute(const TransitionMeasurements& m, const std::vector<Histogram>* histograms,
                             ImageDims dims, const SamplingConfig& config) {
  if (histograms && static_cast<int>(histograms->size()) != m.n) {
    throw InputError("histogram count does not match frame count");
  }
  CostTable table(m.n, m.tau);
  table.dims_ = dims;
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j <= std::min(m.n - 1, i + m.tau); ++j) {
      TransitionCosts& tc = table.at(i, j);
      tc.direction = m.directions[m.slot(i, j)];
      tc.S = shakiness_cost(tc.direction, dims, config);
      tc.V = velocity_cost(m.magnitudes[m.slot(i, j)], config);
      tc.C = histograms ? appearance_cost((*histograms)[static_cast<std::size_t>(i)],
                                          (*histograms)[static_cast<std::size_t>(j)])
                        : 0.0;
      tc.W = edge_weight(tc.S, tc.V, tc.C, config);
    }
  }
  return table;
}

}  // namespace strideskip
