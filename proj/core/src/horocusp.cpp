#include "hilbert/horocusp.hpp"

#include "hilbert/error.hpp"
#include "hilbert/lp.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/scene.hpp"

#include <algorithm>
#include <cmath>

namespace hilbert {

namespace {

Vec oriented_support(const ConvexBody& body, const ProjPoint& p) {
  const auto cone = supporting_cone(body, p);
  if (cone.empty()) throw Error(ErrorCode::NotSupporting, "no supporting hyperplane found");
  Vec h = cone.front().covector();
  if (h.dot(body.witness()) < 0) h = -h;
  return h;
}

}  // namespace

ParabolicChart make_chart(const ConvexBody& body, const ProjPoint& p, std::optional<Vec> H,
                          std::optional<ProjPoint> r) {
  const int N = body.size();
  if (p.size() != N) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
  const Vec P = body.normalize_or_throw(p);
  if (locate(body, P, 1e-9) != Location::Boundary) throw Error(ErrorCode::NotBoundary, "p is not a boundary point");
  Vec h = H ? *H : oriented_support(body, p);
  if (h.size() != N) throw Error(ErrorCode::InvalidInput, "covector dimension does not match the body");
  if (h.dot(body.witness()) < 0) h = -h;
  if (std::abs(h.dot(P)) > 1e-8 * h.norm() * P.norm() || !(h.dot(body.witness()) > 0))
    throw Error(ErrorCode::NotSupporting, "H does not support the body at p");
  {
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
      const Vec b = sample_boundary(body, rng);
      if (h.dot(b) < -1e-8 * h.norm() * b.norm()) throw Error(ErrorCode::NotSupporting, "H cuts the body");
    }
  }
  Vec R;
  if (r) {
    if (r->size() != N) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
    R = body.normalize_or_throw(*r);
    if (locate(body, R, 1e-9) != Location::Boundary) throw Error(ErrorCode::NotBoundary, "r is not a boundary point");
  } else {
    const Vec D = body.witness() - P;
    const Interval I = body.cone_interval(body.witness(), D);
    if (!std::isfinite(I.hi)) throw Error(ErrorCode::SegmentNotInterior, "vertical line through the witness is unbounded");
    R = body.witness() + I.hi * D;
  }
  if (locate(body, 0.5 * (P + R), body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::SegmentNotInterior, "open segment (p, r) is not interior");
  const double hr = h.dot(R);
  if (!(hr > 0)) throw Error(ErrorCode::SegmentNotInterior, "r lies on H");
  h /= hr;
  Vec nu = oriented_support(body, ProjPoint(R));
  const double np = nu.dot(P);
  if (!(np > 0)) throw Error(ErrorCode::SegmentNotInterior, "supporting hyperplane at r contains p");
  nu /= np;

  Mat S(2, N);
  S.row(0) = P.transpose();
  S.row(1) = R.transpose();
  const Mat K = null_space(S, 1e-12);
  if (K.cols() != N - 2) throw Error(ErrorCode::SegmentNotInterior, "p and r coincide");
  ParabolicChart c{body, P, R, h, nu, Mat(N, N), Mat()};
  c.C.topRows(N - 2) = K.transpose();
  c.C.row(N - 2) = nu.transpose();
  c.C.row(N - 1) = h.transpose();
  c.Cinv = c.C.inverse();
  return c;
}

Vec chart_coordinates(const ParabolicChart& chart, const Vec& X) {
  const Vec Z = chart.C * X;
  const int N = static_cast<int>(Z.size());
  if (!(Z(N - 1) > 0)) throw Error(ErrorCode::NotInterior, "point is not on the positive side of H");
  return Z.head(N - 1) / Z(N - 1);
}

Vec chart_lift(const ParabolicChart& chart, const Vec& y) {
  Vec Z(y.size() + 1);
  Z << y, 1.0;
  const Vec X = chart.Cinv * Z;
  const auto Xn = chart.body.normalize(X);
  if (!Xn) throw Error(ErrorCode::NumericalFailure, "chart point lies at infinity of the patch");
  return *Xn;
}

std::optional<double> boundary_graph(const ParabolicChart& chart, const Vec& u) {
  const int N = chart.body.size();
  if (u.size() != N - 2) throw Error(ErrorCode::InvalidInput, "horizontal coordinate has the wrong size");
  Vec Z(N);
  Z.head(N - 2) = u;
  Z(N - 1) = 1.0;
  for (int k = 0; k <= 60; ++k) {
    const double s = std::ldexp(1.0, k) - 1.0;
    Z(N - 2) = s;
    const Vec W = chart.Cinv * Z;
    if (!chart.body.in_cone(W)) continue;
    const Interval I = chart.body.cone_interval(W, chart.P);
    return s + I.lo;
  }
  return std::nullopt;
}

double horosphere_height(const ParabolicChart& chart, const Vec& X) {
  const Vec y = chart_coordinates(chart, X);
  const int n = static_cast<int>(y.size());
  const auto f = boundary_graph(chart, y.head(n - 1));
  if (!f) throw Error(ErrorCode::OutsideRadialShadow, "vertical projection lies outside the radial shadow");
  return y(n - 1) - *f;
}

double horosphere_height(const ParabolicChart& chart, const ProjPoint& q) {
  const Vec X = chart.body.normalize_or_throw(q);
  // boundary points other than p sit on S_0
  if (locate(chart.body, X, chart.body.tolerances().boundary_band) == Location::Exterior)
    throw Error(ErrorCode::NotInterior, "point lies outside the closure");
  return horosphere_height(chart, X);
}

std::vector<Vec> horosphere_points(const ParabolicChart& chart, double t, const std::vector<Vec>& us) {
  std::vector<Vec> out;
  for (const auto& u : us) {
    const auto f = boundary_graph(chart, u);
    if (!f) continue;
    Vec y(u.size() + 1);
    y << u, *f + t;
    out.push_back(chart_lift(chart, y));
  }
  return out;
}

ProjMap vertical_translation(const ParabolicChart& chart, double t) {
  const int N = chart.body.size();
  return ProjMap(Mat::Identity(N, N) + t * chart.P * chart.H.transpose());
}

double tau(const ParabolicChart& chart, const ProjMap& B, double) {
  const Mat& M = B.matrix();
  if (M.rows() != chart.body.size()) throw Error(ErrorCode::InvalidInput, "map dimension does not match the chart");
  const Vec MP = M * chart.P;
  const double lp = chart.nu.dot(MP);
  const Vec HM = (chart.H.transpose() * M).transpose();
  const double lm = HM.dot(chart.R);
  if ((MP - lp * chart.P).norm() > 1e-9 * MP.norm() || (HM - lm * chart.H).norm() > 1e-9 * HM.norm())
    throw Error(ErrorCode::NotInStabilizer, "map does not fix p and H");
  const double ratio = lp / lm;
  if (!(ratio > 0)) throw Error(ErrorCode::NotInStabilizer, "map exchanges the sides of H");
  return ratio;
}

double displacement(const ParabolicChart& chart, const ProjMap& B, double unit_band) {
  const double t = tau(chart, B, unit_band);
  const Spectrum sp = spectrum(B);
  bool unit = true;
  for (const auto& c : sp.eigenvalues)
    if (std::abs(std::abs(c.value) - 1.0) > unit_band) unit = false;
  return unit ? 0.0 : std::log(t);
}

BusemannResult busemann(const ParabolicChart& chart, const ProjPoint& q, const BusemannOptions& opts) {
  const Vec X = chart.body.normalize_or_throw(q);
  if (locate(chart.body, X, chart.body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "point is not interior");
  const int n = chart.body.dim();
  BusemannResult out;
  Vec y = Vec::Zero(n);
  double prev = 0.0;
  for (double t = 0.0; t <= opts.T_max + 1e-12; t += opts.step) {
    y(n - 1) = std::exp(t);
    const double b = hilbert_distance(chart.body, X, chart_lift(chart, y)) - t;
    out.sequence.push_back(b);
    out.t_reached = t;
    out.value = b;
    if (out.sequence.size() > 1) {
      out.gap = std::abs(b - prev);
      if (out.gap < opts.tol) {
        out.converged = true;
        break;
      }
    }
    prev = b;
  }
  return out;
}

BusemannResult busemann(const ConvexBody& body, const ProjPoint& p, const ProjPoint& q, const BusemannOptions& opts) {
  if (!boundary_probe(body, p).is_C1) throw Error(ErrorCode::NotC1Point, "p is not a C1 boundary point");
  return busemann(make_chart(body, p), q, opts);
}

double busemann_closed_form(const ParabolicChart& chart, const ProjPoint& q) {
  return -std::log(std::abs(horosphere_height(chart, q)));
}

ProjMap translation_group_element(const Vec& u) {
  const int n = static_cast<int>(u.size());
  Mat T = Mat::Identity(n + 2, n + 2);
  T.block(0, 1, 1, n) = u.transpose();
  T(0, n + 1) = 0.5 * u.squaredNorm();
  T.block(1, n + 1, n, 1) = u;
  return ProjMap(T);
}

ProjMap paraboloid_to_ball(int n) {
  Mat M = Mat::Zero(n + 2, n + 2);
  M(0, 0) = 1.0;
  M(0, n + 1) = -1.0;
  M.block(1, 1, n, n) = std::sqrt(2.0) * Mat::Identity(n, n);
  M(n + 1, 0) = 1.0;
  M(n + 1, n + 1) = 1.0;
  return ProjMap(M);
}

CharacterizationReport ellipsoid_characterization_demo(int n, const std::vector<Vec>& grid) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "n must be at least 1");
  CharacterizationReport rep;
  rep.n = n;
  rep.points = static_cast<int>(grid.size());
  const ProjMap ball = paraboloid_to_ball(n);
  rep.ball_map = ball.matrix();
  Vec origin = Vec::Zero(n + 2);
  origin(n + 1) = 1.0;
  std::vector<Vec> orbit;
  for (const auto& u : grid) {
    if (u.size() != n) throw Error(ErrorCode::InvalidInput, "grid vector has the wrong size");
    const Vec o = translation_group_element(u).matrix() * origin;
    const Vec a = o / o(n + 1);
    rep.paraboloid_residual = std::max(rep.paraboloid_residual, std::abs(a(0) - 0.5 * a.segment(1, n).squaredNorm()));
    const Vec img = ball.matrix() * a;
    rep.sphere_residual = std::max(rep.sphere_residual, std::abs((img.head(n + 1) / img(n + 1)).norm() - 1.0));
    orbit.push_back(a);
  }
  const size_t k = orbit.size();
  for (size_t i = 0; i < std::min<size_t>(k, 20); ++i) {
    const size_t j = (i * 7 + 3) % k;
    const Vec img = translation_group_element(grid[j] - grid[i]).matrix() * orbit[i];
    rep.transitivity_residual = std::max(rep.transitivity_residual, (img / img(n + 1) - orbit[j]).cwiseAbs().maxCoeff());
  }
  if (static_cast<int>(k) >= n + 2) {
    Mat V(n + 2, static_cast<Eigen::Index>(k));
    for (size_t j = 0; j < k; ++j) V.col(static_cast<Eigen::Index>(j)) = orbit[j];
    try {
      const ConvexBody hull = ConvexBody::polytope_v(V);
      if (hull.facets()) rep.hull_facets = static_cast<int>(hull.facets()->rows());
      for (size_t j = 0; j < k; ++j) {
        // o_j is a vertex unless it is a convex combination of the others
        LinearProgram lp(static_cast<int>(k) - 1);
        for (int r = 0; r < n + 2; ++r) {
          Vec row(static_cast<Eigen::Index>(k) - 1);
          for (size_t i = 0, c = 0; i < k; ++i)
            if (i != j) row(static_cast<Eigen::Index>(c++)) = orbit[i](r);
          lp.add_eq(row, orbit[j](r));
        }
        if (lp.minimize(Vec::Zero(static_cast<Eigen::Index>(k) - 1)).status == LpStatus::Infeasible) ++rep.hull_vertices;
      }
    } catch (const Error&) {
      // degenerate grids (for example collinear u) have no full-dimensional hull
    }
  }
  return rep;
}

nlohmann::json to_json(const CharacterizationReport& r) {
  return {{"n", r.n},
          {"points", r.points},
          {"paraboloid_residual", r.paraboloid_residual},
          {"sphere_residual", r.sphere_residual},
          {"transitivity_residual", r.transitivity_residual},
          {"hull_vertices", r.hull_vertices},
          {"hull_facets", r.hull_facets},
          {"ball_map", hilbert::to_json(r.ball_map)}};
}

}  // namespace hilbert
