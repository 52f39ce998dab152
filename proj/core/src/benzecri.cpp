#include "hilbert/domain.hpp"
#include "hilbert/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hilbert {

namespace {

std::vector<Vec> direction_grid(int n, int count, std::uint64_t seed, double phase) {
  std::vector<Vec> dirs;
  if (n == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    return dirs;
  }
  if (n == 2) {
    // half circle suffices: each direction also yields its opposite
    const int half = std::max(4, count / 2);
    for (int i = 0; i < half; ++i) {
      const double a = std::numbers::pi * (i + phase) / half;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
    return dirs;
  }
  Rng rng(seed);
  for (int i = 0; i < n; ++i) dirs.push_back(Vec::Unit(n, i));
  while (static_cast<int>(dirs.size()) < std::max(n, count / 2)) dirs.push_back(rng.unit_vector(n));
  return dirs;
}

// Minimum-volume origin-centered ellipsoid {x : x^T M x <= 1} containing the columns of P.
Mat centered_mvee(const Mat& P, double tol = 1e-7, int max_iter = 20000) {
  const int n = static_cast<int>(P.rows());
  const int m = static_cast<int>(P.cols());
  Vec w = Vec::Constant(m, 1.0 / m);
  Mat X;
  for (int it = 0; it < max_iter; ++it) {
    X = P * w.asDiagonal() * P.transpose();
    const Eigen::LLT<Mat> llt(X);
    const Mat Z = llt.solve(P);
    const Vec g = (P.cwiseProduct(Z)).colwise().sum().transpose();
    Eigen::Index j = 0;
    const double gmax = g.maxCoeff(&j);
    if (gmax <= n * (1.0 + tol)) break;
    const double step = (gmax - n) / (n * (gmax - 1.0));
    w *= (1.0 - step);
    w(j) += step;
  }
  X = P * w.asDiagonal() * P.transpose();
  return (n * X).inverse();
}

Mat sqrt_spd(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

BenzecriTargetNotMet::BenzecriTargetNotMet(BenzecriChart best, double target)
    : Error(ErrorCode::TargetNotMet,
            "achieved R = " + std::to_string(best.R_achieved) + " exceeds target " + std::to_string(target)),
      best_(std::move(best)) {}

std::pair<double, double> benzecri_radii(const ConvexBody& body, const ProjPoint& p, const ProjMap& tau,
                                         int directions, std::uint64_t seed) {
  const Vec P = body.normalize_or_throw(p);
  const int n = body.dim();
  const auto dirs = direction_grid(n, directions, derive_seed(seed, 99), 0.5);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  auto radius = [&](const Vec& X) {
    const Vec Y = tau.matrix() * X;
    return (Y.head(n) / Y(n)).norm();
  };
  for (const auto& u : dirs) {
    const Vec D = body.chart_basis() * u;
    const Interval I = body.cone_interval(P, D);
    if (!std::isfinite(I.lo) || !std::isfinite(I.hi)) throw Error(ErrorCode::NumericalFailure, "unbounded chord");
    for (const double t : {I.lo, I.hi}) {
      const double r = radius(P + t * D);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
  }
  return {rmin, rmax};
}

BenzecriChart benzecri_chart(const ConvexBody& body, const ProjPoint& p, double R_target, int directions,
                             std::uint64_t seed) {
  if (!(R_target > 1.0)) throw Error(ErrorCode::InvalidInput, "R_target must exceed 1");
  const Vec P = body.normalize_or_throw(p);
  if (locate(body, P, body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "chart center must be interior");
  const int n = body.dim();
  const int N = body.size();
  const Mat& E = body.chart_basis();
  const auto dirs = direction_grid(n, directions, seed, 0.0);
  const int m = static_cast<int>(dirs.size());

  // gauge g(u) = 1 / radial distance, for u and -u
  Vec gp(m), gm(m);
  Mat U(m, n);
  for (int i = 0; i < m; ++i) {
    const Interval I = body.cone_interval(P, E * dirs[i]);
    if (!std::isfinite(I.lo) || !std::isfinite(I.hi)) throw Error(ErrorCode::NumericalFailure, "unbounded chord");
    gp(i) = 1.0 / I.hi;
    gm(i) = 1.0 / (-I.lo);
    U.row(i) = dirs[i].transpose();
  }
  // x -> x / (1 + <c, x>) shifts the gauge by <c, u>; cancel its odd part
  const Vec odd = 0.5 * (gp - gm);
  Vec c = -(U.transpose() * U).ldlt().solve(U.transpose() * odd);
  const double even_min = (0.5 * (gp + gm)).minCoeff();
  for (int k = 0; k < 60; ++k) {
    const Vec s = U * c;
    if ((gp + s).minCoeff() > 0.05 * even_min && (gm - s).minCoeff() > 0.05 * even_min) break;
    c *= 0.5;
  }
  const Vec s = U * c;
  Mat pts(n, 2 * m);
  for (int i = 0; i < m; ++i) {
    pts.col(2 * i) = dirs[i] / (gp(i) + s(i));
    pts.col(2 * i + 1) = -dirs[i] / (gm(i) - s(i));
  }
  Mat sym(n, 4 * m);
  sym << pts, -pts;
  const Mat M = centered_mvee(sym);
  Mat L = sqrt_spd(M);
  double rmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < pts.cols(); ++j) rmin = std::min(rmin, (L * pts.col(j)).norm());
  L /= rmin;

  // homogeneous assembly: chart coordinates, translate p to 0, projective centering, linear map
  const Vec xp = body.to_chart(P);
  Mat C0(N, N);
  C0.topRows(n) = E.transpose();
  C0.row(n) = body.patch().transpose();
  Mat Tr = Mat::Identity(N, N);
  Tr.topRightCorner(n, 1) = -xp;
  Mat Pc = Mat::Identity(N, N);
  Pc.bottomLeftCorner(1, n) = c.transpose();
  Mat Lh = Mat::Identity(N, N);
  Lh.topLeftCorner(n, n) = L;
  Mat T = Lh * Pc * Tr * C0;

  BenzecriChart out;
  out.directions = directions;
  auto [r0, r1] = benzecri_radii(body, p, ProjMap(T), directions, seed);
  // rescale so the verified inner radius is exactly 1 on the grid
  Lh.topLeftCorner(n, n) = L / r0;
  T = Lh * Pc * Tr * C0;
  out.tau = ProjMap(T);
  std::tie(out.r_min, out.r_max) = benzecri_radii(body, p, out.tau, directions, seed);
  out.R_achieved = out.r_max / std::min(1.0, out.r_min);
  if (out.R_achieved > R_target) throw BenzecriTargetNotMet(out, R_target);
  return out;
}

}  // namespace hilbert
