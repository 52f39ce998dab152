#include "hilbert/metric.hpp"

#include "hilbert/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace hilbert {

namespace {

Vec interior_lift(const ConvexBody& body, const ProjPoint& p) {
  const Vec X = body.normalize_or_throw(p);
  if (locate(body, X, body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "point is not interior");
  return X;
}

Vec patch_vector(const ConvexBody& body, const Vec& A, const Vec& v) {
  if (v.size() == body.dim()) return body.chart_basis() * v;
  if (v.size() == body.size()) return v - body.patch().dot(v) * A;
  throw Error(ErrorCode::InvalidInput, "direction has the wrong size");
}

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

double hilbert_distance(const ConvexBody& body, const Vec& A0, const Vec& B0) {
  const bool swap = lex_less(B0, A0);
  const Vec& A = swap ? B0 : A0;
  const Vec& B = swap ? A0 : B0;
  const Vec D = B - A;
  const double L = D.norm();
  if (L == 0.0) return 0.0;
  const Interval I = body.cone_interval(A, D / L);
  const double left = -I.lo, right = I.hi - L;
  if (!(left > 0.0) || !(right > 0.0)) throw Error(ErrorCode::NotInterior, "points are not interior");
  return std::log1p(L / left) + std::log1p(L / right);
}

double hilbert_distance(const ConvexBody& body, const ProjPoint& a, const ProjPoint& b) {
  return hilbert_distance(body, interior_lift(body, a), interior_lift(body, b));
}

FinslerSample finsler_sample(const ConvexBody& body, const ProjPoint& a, const Vec& v) {
  const Vec A = interior_lift(body, a);
  const Vec V = patch_vector(body, A, v);
  const double len = V.norm();
  if (!(len > 0.0)) throw Error(ErrorCode::InvalidInput, "direction is zero in the patch");
  const Vec u = V / len;
  const Interval I = body.cone_interval(A, u);
  FinslerSample s;
  s.base = A;
  s.direction = u;
  s.norm_value = len * (1.0 / I.hi + 1.0 / (-I.lo));
  return s;
}

double finsler_norm(const ConvexBody& body, const ProjPoint& a, const Vec& v) {
  return finsler_sample(body, a, v).norm_value;
}

Vec ball_point(const ConvexBody& body, const Vec& C, const Vec& D0, double r) {
  const Vec D = D0.normalized();
  const Interval I = body.cone_interval(C, D);
  const double a = -I.lo, b = I.hi, er = std::exp(r);
  double t;
  // (1 + t/a) * b / (b - t) = e^r
  if (!std::isfinite(a) && !std::isfinite(b)) throw Error(ErrorCode::NumericalFailure, "line lies in the body");
  if (!std::isfinite(a)) t = b * (1.0 - 1.0 / er);
  else if (!std::isfinite(b)) t = a * std::expm1(r);
  else t = a * b * std::expm1(r) / (b + a * er);
  return C + t * D;
}

std::vector<Vec> metric_ball(const ConvexBody& body, const ProjPoint& center, double r, int samples,
                             std::uint64_t seed) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  const Vec C = interior_lift(body, center);
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) out.push_back(ball_point(body, C, random_patch_direction(body, rng), r));
  return out;
}

std::string points_csv(const std::vector<Vec>& points) {
  std::ostringstream os;
  const Eigen::Index N = points.empty() ? 0 : points.front().size();
  for (Eigen::Index i = 0; i < N; ++i) os << (i ? "," : "") << 'x' << i;
  os << '\n' << std::setprecision(17);
  for (const auto& p : points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p(i);
    os << '\n';
  }
  return os.str();
}

double busemann_density(const ConvexBody& body, const Vec& X, int directions, Rng& rng) {
  const int n = body.dim();
  const Mat& E = body.chart_basis();
  auto F = [&](const Vec& u) {
    const Interval I = body.cone_interval(X, E * u);
    return 1.0 / I.hi + 1.0 / (-I.lo);
  };
  if (n == 1) return F(Vec::Constant(1, 1.0));
  const int k = std::max(2, directions / 2);
  double acc = 0.0;
  if (n == 2) {
    const double phase = rng.uniform();
    if (const auto& Q = body.quadratic_form()) {
      // q(t) = a t^2 + 2 b t + c along X + t E u
      const Mat QE = (*Q) * E;
      const Mat M = E.transpose() * QE;
      const Vec g = QE.transpose() * X;
      const double c = X.dot((*Q) * X);
      for (int i = 0; i < k; ++i) {
        const double th = std::numbers::pi * (i + phase) / k;
        const double u0 = std::cos(th), u1 = std::sin(th);
        const double a = M(0, 0) * u0 * u0 + 2.0 * M(0, 1) * u0 * u1 + M(1, 1) * u1 * u1;
        const double b = g(0) * u0 + g(1) * u1;
        // 1/t+ + 1/(-t-) = (r2 - r1) / (-r1 r2) = 2 sqrt(b^2 - a c) / (-c)
        const double f = 2.0 * std::sqrt(b * b - a * c) / (-c);
        acc += 1.0 / (f * f);
      }
      return static_cast<double>(k) / acc;
    }
    for (int i = 0; i < k; ++i) {
      const double th = std::numbers::pi * (i + phase) / k;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      const double f = F(u);
      acc += 1.0 / (f * f);
    }
    return static_cast<double>(k) / acc;
  }
  for (int i = 0; i < k; ++i) acc += std::pow(F(rng.unit_vector(n)), -n);
  return static_cast<double>(k) / acc;
}

VolumeEstimate busemann_volume(const ConvexBody& body, const Region& region, const Vec& lo, const Vec& hi,
                               long samples, std::uint64_t seed, const VolumeOptions& opts) {
  const int n = body.dim();
  if (lo.size() != n || hi.size() != n || !((hi - lo).array() > 0).all())
    throw Error(ErrorCode::InvalidInput, "bounding box must be a nondegenerate chart box");
  if (samples <= 1) throw Error(ErrorCode::InvalidInput, "need at least two samples");
  const double box = (hi - lo).prod();
  const int shards = std::max(1, opts.shards);
  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    long rejected = 0;
  };
  std::vector<Acc> acc(static_cast<size_t>(shards));
  run_shards(shards, seed, [&](int s, std::uint64_t shard_seed) {
    Rng rng(shard_seed);
    const long count = samples / shards + (s < samples % shards ? 1 : 0);
    Acc a;
    Vec y(n);
    for (long i = 0; i < count; ++i) {
      for (int j = 0; j < n; ++j) y(j) = rng.uniform(lo(j), hi(j));
      const Vec X = body.from_chart(y);
      if (!body.in_cone(X)) {
        ++a.rejected;
        continue;
      }
      if (!region(X)) continue;
      const double f = busemann_density(body, X, opts.directions, rng);
      a.sum += f;
      a.sumsq += f * f;
    }
    acc[static_cast<size_t>(s)] = a;
  });
  Acc total;
  for (const auto& a : acc) {
    total.sum += a.sum;
    total.sumsq += a.sumsq;
    total.rejected += a.rejected;
  }
  const double N = static_cast<double>(samples);
  const double mean = total.sum / N;
  const double var = std::max(0.0, total.sumsq / N - mean * mean) * N / (N - 1.0);
  VolumeEstimate out;
  out.estimate = box * mean;
  out.std_error = box * std::sqrt(var / N);
  out.samples = samples;
  out.rejected = total.rejected;
  return out;
}

std::pair<Vec, Vec> hilbert_ball_box(const ConvexBody& body, const ProjPoint& center, double r, int samples,
                                     double margin) {
  const auto pts = metric_ball(body, center, r, samples, 17);
  const int n = body.dim();
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& X : pts) {
    const Vec y = body.to_chart(X);
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  const Vec pad = margin * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace hilbert
