#include "strideskip/epipolar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "strideskip/errors.hpp"

namespace strideskip {

const char* to_string(DirectionSource s) {
  switch (s) {
    case DirectionSource::epipole: return "epipole";
    case DirectionSource::foe: return "foe";
    case DirectionSource::unavailable: return "unavailable";
  }
  return "unavailable";
}

const char* to_string(DirectionMode m) {
  return m == DirectionMode::epipolar ? "epipolar" : "foe-only";
}

DirectionSource direction_source_from_string(const std::string& s) {
  if (s == "epipole") return DirectionSource::epipole;
  if (s == "foe") return DirectionSource::foe;
  if (s == "unavailable") return DirectionSource::unavailable;
  throw InputError("unknown direction source '" + s + "'");
}

DirectionMode direction_mode_from_string(const std::string& s) {
  if (s == "epipolar") return DirectionMode::epipolar;
  if (s == "foe-only") return DirectionMode::foe_only;
  throw InputError("mode must be epipolar or foe-only, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Chained correspondences

CorrespondenceChainer::CorrespondenceChainer(const GridSpec& grid, ImageDims dims)
    : grid_(grid), dims_(dims), origin_(grid.origin(dims)), step_(grid.spacing(dims)) {}

bool CorrespondenceChainer::inside(const Vec2& q) const {
  return q.x() >= 0 && q.y() >= 0 && q.x() <= dims_.width && q.y() <= dims_.height;
}

std::optional<Vec2> CorrespondenceChainer::interpolate(const FlowGrid& g, const Vec2& q) const {
  const double u = (q.x() - origin_.x()) / step_.x();
  const double v = (q.y() - origin_.y()) / step_.y();
  const int c0 = std::clamp(static_cast<int>(std::floor(u)), 0, grid_.cols - 2);
  const int r0 = std::clamp(static_cast<int>(std::floor(v)), 0, grid_.rows - 2);
  const double ax = std::clamp(u - c0, 0.0, 1.0);
  const double ay = std::clamp(v - r0, 0.0, 1.0);

  const int idx[4] = {r0 * grid_.cols + c0, r0 * grid_.cols + c0 + 1, (r0 + 1) * grid_.cols + c0,
                      (r0 + 1) * grid_.cols + c0 + 1};
  const double wt[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
  Vec2 acc = Vec2::Zero(), plain = Vec2::Zero();
  double wsum = 0.0;
  int nvalid = 0;
  for (int i = 0; i < 4; ++i) {
    if (!g.valid[static_cast<std::size_t>(idx[i])]) continue;
    acc += wt[i] * g.vectors[static_cast<std::size_t>(idx[i])];
    plain += g.vectors[static_cast<std::size_t>(idx[i])];
    wsum += wt[i];
    ++nvalid;
  }
  if (nvalid == 0) return std::nullopt;
  if (wsum < 1e-12) return Vec2(plain / nvalid);
  return Vec2(acc / wsum);
}

void CorrespondenceChainer::start(const FlowGrid& first) {
  start_.clear();
  position_.clear();
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!first.valid[i]) continue;
    const Vec2 q = first.points[i] + first.vectors[i];
    if (!inside(q)) continue;
    start_.push_back(first.points[i]);
    position_.push_back(q);
  }
}

void CorrespondenceChainer::advance(const FlowGrid& g) {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < position_.size(); ++i) {
    const auto step = interpolate(g, position_[i]);
    if (!step) continue;
    const Vec2 q = position_[i] + *step;
    if (!inside(q)) continue;
    start_[kept] = start_[i];
    position_[kept] = q;
    ++kept;
  }
  start_.resize(kept);
  position_.resize(kept);
}

Correspondences CorrespondenceChainer::current() const { return {start_, position_}; }

Correspondences chain_correspondences(std::span<const FlowGrid> flows, const GridSpec& grid,
                                      ImageDims dims) {
  if (flows.empty()) return {};
  CorrespondenceChainer chainer(grid, dims);
  chainer.start(flows.front());
  for (std::size_t i = 1; i < flows.size(); ++i) {
    if (flows[i].t != flows[i - 1].t + 1) throw InputError("chain_correspondences: frame gap");
    chainer.advance(flows[i]);
  }
  return chainer.current();
}

// ---------------------------------------------------------------------------
// Fundamental matrix

namespace {

// Similarity taking the points to zero mean and mean distance sqrt(2).
Eigen::Matrix3d normalizing_transform(std::span<const Vec2> pts) {
  Vec2 mean = Vec2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double dist = 0.0;
  for (const auto& p : pts) dist += (p - mean).norm();
  dist /= static_cast<double>(pts.size());
  const double s = dist > 1e-12 ? std::sqrt(2.0) / dist : 1.0;
  Eigen::Matrix3d T;
  T << s, 0, -s * mean.x(), 0, s, -s * mean.y(), 0, 0, 1;
  return T;
}

Eigen::Matrix3d enforce_rank2(const Eigen::Matrix3d& F) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(F, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d s = svd.singularValues();
  s(2) = 0.0;
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

template <typename Derived>
void fill_row(Eigen::MatrixBase<Derived>&& row, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  row << b.x() * a.x(), b.x() * a.y(), b.x(), b.y() * a.x(), b.y() * a.y(), b.y(), a.x(), a.y(), 1.0;
}

// Solves for F from exactly eight matches; nullopt for degenerate samples.
std::optional<Eigen::Matrix3d> minimal_8point(const std::array<Vec2, 8>& a,
                                              const std::array<Vec2, 8>& b) {
  const Eigen::Matrix3d Ta = normalizing_transform(a);
  const Eigen::Matrix3d Tb = normalizing_transform(b);
  Eigen::Matrix<double, 8, 9> A;
  for (int i = 0; i < 8; ++i) {
    fill_row(A.row(i), Ta * a[static_cast<std::size_t>(i)].homogeneous(),
             Tb * b[static_cast<std::size_t>(i)].homogeneous());
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 9>> lu(A);
  lu.setThreshold(1e-9);
  if (lu.rank() != 8) return std::nullopt;
  const Eigen::Matrix<double, 9, 1> f = lu.kernel().col(0);
  Eigen::Matrix3d Fn;
  Fn << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
  Eigen::Matrix3d F = Tb.transpose() * enforce_rank2(Fn) * Ta;
  const double norm = F.norm();
  if (!(norm > 0) || !F.allFinite()) return std::nullopt;
  return F / norm;
}

std::optional<Eigen::Matrix3d> fit_homography(std::span<const Vec2> from, std::span<const Vec2> to) {
  const Eigen::Matrix3d Ta = normalizing_transform(from);
  const Eigen::Matrix3d Tb = normalizing_transform(to);
  Eigen::Matrix<double, 9, 9> AtA = Eigen::Matrix<double, 9, 9>::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Eigen::Vector3d a = Ta * from[i].homogeneous();
    const Eigen::Vector3d b = Tb * to[i].homogeneous();
    Eigen::Matrix<double, 1, 9> r1, r2;
    r1 << 0, 0, 0, -b.z() * a.x(), -b.z() * a.y(), -b.z() * a.z(), b.y() * a.x(), b.y() * a.y(),
        b.y() * a.z();
    r2 << b.z() * a.x(), b.z() * a.y(), b.z() * a.z(), 0, 0, 0, -b.x() * a.x(), -b.x() * a.y(),
        -b.x() * a.z();
    AtA += r1.transpose() * r1 + r2.transpose() * r2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(AtA);
  const Eigen::Matrix<double, 9, 1> h = eig.eigenvectors().col(0);
  Eigen::Matrix3d Hn;
  Hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d H = Tb.inverse() * Hn * Ta;
  if (!H.allFinite()) return std::nullopt;
  return H;
}

}  // namespace

std::optional<Eigen::Matrix3d> fundamental_8point(std::span<const Vec2> from,
                                                  std::span<const Vec2> to) {
  if (from.size() < 8 || from.size() != to.size()) return std::nullopt;
  const Eigen::Matrix3d Ta = normalizing_transform(from);
  const Eigen::Matrix3d Tb = normalizing_transform(to);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(from.size()), 9);
  for (std::size_t i = 0; i < from.size(); ++i) {
    fill_row(A.row(static_cast<Eigen::Index>(i)), Ta * from[i].homogeneous(), Tb * to[i].homogeneous());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd f = svd.matrixV().col(8);
  Eigen::Matrix3d Fn;
  Fn << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
  Eigen::Matrix3d F = Tb.transpose() * enforce_rank2(Fn) * Ta;
  const double norm = F.norm();
  if (!(norm > 0) || !F.allFinite()) return std::nullopt;
  return F / norm;
}

double sampson_distance(const Eigen::Matrix3d& F, const Vec2& from, const Vec2& to) {
  const Eigen::Vector3d a = from.homogeneous();
  const Eigen::Vector3d b = to.homogeneous();
  const Eigen::Vector3d Fa = F * a;
  const Eigen::Vector3d Ftb = F.transpose() * b;
  const double num = b.dot(Fa);
  const double den = Fa.x() * Fa.x() + Fa.y() * Fa.y() + Ftb.x() * Ftb.x() + Ftb.y() * Ftb.y();
  if (den <= 0) return std::numeric_limits<double>::infinity();
  return std::abs(num) / std::sqrt(den);
}

Outcome<FundamentalMatrix> estimate_fundamental_ransac(const Correspondences& c,
                                                       const RansacParams& params) {
  const std::size_t n = c.size();
  if (n < 8) return Outcome<FundamentalMatrix>::fail("insufficient correspondences");

  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto count_inliers = [&](const Eigen::Matrix3d& F, std::vector<std::uint8_t>* mask) {
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in = sampson_distance(F, c.from[i], c.to[i]) < params.inlier_threshold;
      if (mask) (*mask)[i] = in ? 1 : 0;
      count += in ? 1 : 0;
    }
    return count;
  };

  std::optional<Eigen::Matrix3d> best;
  int best_count = 0;
  double needed = params.iterations;
  for (int iter = 0; iter < params.iterations && iter < needed; ++iter) {
    // Partial Fisher-Yates draw of eight distinct indices.
    std::array<Vec2, 8> a, b;
    for (std::size_t s = 0; s < 8; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, n - 1);
      std::swap(order[s], order[pick(rng)]);
      a[s] = c.from[order[s]];
      b[s] = c.to[order[s]];
    }
    const auto F = minimal_8point(a, b);
    if (!F) continue;
    const int count = count_inliers(*F, nullptr);
    if (count > best_count) {
      best_count = count;
      best = F;
      const double w = static_cast<double>(count) / static_cast<double>(n);
      const double p_good = std::pow(w, 8);
      if (p_good >= 1.0 - 1e-12) {
        needed = 0;
      } else if (p_good > 0) {
        needed = std::log(1.0 - params.confidence) / std::log(1.0 - p_good);
      }
    }
  }
  if (!best) return Outcome<FundamentalMatrix>::fail("degenerate correspondences");

  std::vector<std::uint8_t> mask(n);
  count_inliers(*best, &mask);
  std::vector<Vec2> in_from, in_to;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    in_from.push_back(c.from[i]);
    in_to.push_back(c.to[i]);
  }
  FundamentalMatrix result;
  result.F = *best;
  if (const auto refit = fundamental_8point(in_from, in_to)) {
    std::vector<std::uint8_t> refit_mask(n);
    if (count_inliers(*refit, &refit_mask) >= best_count) {
      result.F = *refit;
      mask = std::move(refit_mask);
    }
  }
  result.inlier_count = static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
  result.inlier_ratio = static_cast<double>(result.inlier_count) / static_cast<double>(n);
  if (result.inlier_count < params.min_inliers || result.inlier_ratio < params.min_inlier_ratio) {
    return Outcome<FundamentalMatrix>::fail("too few inliers");
  }

  // Without parallax (pure rotation, or a scene at infinity) the epipole is
  // undetermined even though F fits; a homography then explains the matches.
  in_from.clear();
  in_to.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    in_from.push_back(c.from[i]);
    in_to.push_back(c.to[i]);
  }
  if (const auto H = fit_homography(in_from, in_to)) {
    int explained = 0;
    for (std::size_t i = 0; i < in_from.size(); ++i) {
      const Eigen::Vector3d p = *H * in_from[i].homogeneous();
      if (std::abs(p.z()) > 1e-12 && (p.hnormalized() - in_to[i]).norm() < params.inlier_threshold) {
        ++explained;
      }
    }
    if (explained >= params.homography_ratio * static_cast<double>(in_from.size())) {
      return Outcome<FundamentalMatrix>::fail("no parallax: matches fit a homography");
    }
  }
  return Outcome<FundamentalMatrix>::ok(result);
}

Outcome<Vec2> epipole_from_f(const FundamentalMatrix& F, ImageDims dims) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(F.F, Eigen::ComputeFullV);
  const Eigen::Vector3d e = svd.matrixV().col(2);
  if (std::abs(e.z()) < 1e-8 * e.norm()) return Outcome<Vec2>::fail("epipole at infinity");
  const Vec2 point = e.hnormalized() - image_center(dims);
  if (!point.allFinite() || point.norm() > 4.0 * dims.diagonal()) {
    return Outcome<Vec2>::fail("epipole too far from image");
  }
  return Outcome<Vec2>::ok(point);
}

Outcome<Vec2> estimate_foe(const IntegratedFlow& g, ImageDims dims, const FoeParams& params) {
  const Vec2 center = image_center(dims);
  Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
  Vec2 rhs = Vec2::Zero();
  int used = 0;
  for (std::size_t i = 0; i < g.vectors.size(); ++i) {
    const double len = g.vectors[i].norm();
    if (len < params.min_norm) continue;
    const Vec2 normal(-g.vectors[i].y() / len, g.vectors[i].x() / len);
    const Vec2 p = g.points[i] - center;
    const Eigen::Matrix2d nn = normal * normal.transpose();
    M += nn;
    rhs += nn * p;
    ++used;
  }
  if (used < params.min_vectors) return Outcome<Vec2>::fail("too few flow vectors");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(M);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(1);
  if (!(lo > 0) || hi / lo > params.max_condition) return Outcome<Vec2>::fail("flow lines parallel");
  return Outcome<Vec2>::ok(M.ldlt().solve(rhs));
}

MotionDirection resolve_direction(const Correspondences& chains, const IntegratedFlow& mean_flow,
                                  ImageDims dims, DirectionMode mode, RansacParams ransac, int t,
                                  int k) {
  MotionDirection d;
  d.first = t;
  d.last = t + k;
  if (mode == DirectionMode::epipolar) {
    ransac.seed = ransac_seed(t, k);
    if (const auto F = estimate_fundamental_ransac(chains, ransac)) {
      if (const auto e = epipole_from_f(*F, dims)) {
        d.point = *e;
        d.source = DirectionSource::epipole;
        return d;
      }
    }
  }
  if (const auto foe = estimate_foe(mean_flow, dims)) {
    d.point = *foe;
    d.source = DirectionSource::foe;
  }
  return d;
}

MotionDirection motion_direction(int t, int k, std::span<const FlowGrid> flows,
                                 const GridSpec& grid, ImageDims dims, DirectionMode mode,
                                 const RansacParams& ransac) {
  if (k < 1 || t < 0 || static_cast<std::size_t>(t + k) > flows.size()) {
    throw InputError("motion_direction: span (" + std::to_string(t) + ", " + std::to_string(t + k) +
                     ") outside the sequence");
  }
  const auto span = flows.subspan(static_cast<std::size_t>(t), static_cast<std::size_t>(k));
  const Correspondences chains =
      mode == DirectionMode::epipolar ? chain_correspondences(span, grid, dims) : Correspondences{};
  return resolve_direction(chains, integrate_flow(span, Aggregate::mean), dims, mode, ransac, t, k);
}

}  // namespace strideskip
