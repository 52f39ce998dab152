#include "hilbert/duality.hpp"

#include "hilbert/error.hpp"
#include "hilbert/scene.hpp"

#include <cmath>
#include <numeric>

namespace hilbert {

namespace {

void require_cone_point(const ConvexBody& body, const Vec& x) {
  if (x.size() != body.size()) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
  if (!(body.patch().dot(x) > 0) || !body.in_cone(x)) throw Error(ErrorCode::NotInCone, "point is not in the open cone");
}

double factorial(int k) { return std::tgamma(k + 1.0); }

struct SliceSamples {
  Mat sigma;
  Vec weight;
};

// Radial samples of {ψ ∈ C* : ψ(x) = 1} around the point c of that slice; weights ρ^{N−1}
// make weighted averages slice integrals (up to ω_{N−1}).
SliceSamples slice_samples(const ConvexBody& dual, const Vec& x, const Vec& c, long samples, std::uint64_t seed,
                           int shards) {
  const int N = dual.size();
  const int m = N - 1;
  const Mat E = complement_basis(x);
  SliceSamples out{Mat(N, samples), Vec(samples)};
  shards = static_cast<int>(std::max<long>(1, std::min<long>(shards, samples)));
  run_shards(shards, seed, [&](int s, std::uint64_t shard_seed) {
    Rng rng(shard_seed);
    const long begin = samples * s / shards, end = samples * (s + 1) / shards;
    for (long i = begin; i < end; ++i) {
      const Vec D = E * rng.unit_vector(m);
      const Interval I = dual.cone_interval(c, D);
      if (!std::isfinite(I.hi)) throw Error(ErrorCode::NumericalFailure, "dual slice is unbounded");
      const double rho = I.hi;
      const double r = rho * std::pow(rng.uniform(), 1.0 / m);
      out.sigma.col(i) = c + r * D;
      out.weight(i) = std::pow(rho, m);
    }
  });
  return out;
}

}  // namespace

ConvexBody dual_domain(const ConvexBody& body, int samples, std::uint64_t seed) {
  if (!body.properly_convex()) throw Error(ErrorCode::InvalidInput, "dual needs a properly convex body");
  const Vec& w = body.witness();
  const Vec& phi = body.patch();
  ConvexBody dual = [&]() {
    if (const auto& Q = body.quadratic_form()) return ConvexBody::ellipsoid(Q->inverse(), w, phi);
    if (const auto& V = body.vertices()) return ConvexBody::polytope_h(V->transpose(), w, phi);
    if (const auto& F = body.facets()) return ConvexBody::polytope_v(F->transpose(), w, phi);
    Rng rng(seed);
    Mat B(samples, body.size());
    for (int i = 0; i < samples; ++i) B.row(i) = sample_boundary(body, rng).transpose();
    return ConvexBody::polytope_h(B, w, phi);
  }();
  return dual.with_name("dual(" + body.name() + ")").with_provenance({{"dual_of", scene_from_body(body)}});
}

CharacteristicFunction::CharacteristicFunction(const ConvexBody& body, long samples, std::uint64_t seed, int shards)
    : N_(body.size()) {
  if (samples < 2) throw Error(ErrorCode::InvalidInput, "need at least two samples");
  const ConvexBody dual = dual_domain(body);
  const Vec& w = body.witness();
  const Vec c = body.patch() / body.patch().dot(w);
  SliceSamples s = slice_samples(dual, w, c, samples, seed, shards);
  sigma_ = std::move(s.sigma);
  weight_ = std::move(s.weight);
  scale_ = factorial(N_ - 1) * unit_ball_volume(N_ - 1) / w.norm();
}

CharEstimate CharacteristicFunction::operator()(const Vec& x) const {
  const Vec v = sigma_.transpose() * x;
  const long M = v.size();
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < M; ++i) {
    if (!(v(i) > 0)) throw Error(ErrorCode::NotInCone, "point is not in the open cone");
    const double g = weight_(i) * std::pow(v(i), -N_);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / M;
  const double var = std::max(0.0, sumsq / M - mean * mean) * M / (M - 1.0);
  return {scale_ * mean, scale_ * std::sqrt(var / M), M};
}

double CharacteristicFunction::value(const Vec& x) const {
  const Vec v = sigma_.transpose() * x;
  double sum = 0.0;
  for (long i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0)) return std::numeric_limits<double>::infinity();
    sum += weight_(i) * std::pow(v(i), -N_);
  }
  return scale_ * sum / static_cast<double>(v.size());
}

CharEstimate characteristic_function(const ConvexBody& body, const Vec& x, long samples, std::uint64_t seed) {
  require_cone_point(body, x);
  return CharacteristicFunction(body, samples, seed)(x);
}

std::optional<double> characteristic_closed_form(const ConvexBody& body, const Vec& x) {
  require_cone_point(body, x);
  const int N = body.size();
  if (const auto& Q = body.quadratic_form()) {
    const double q = -x.dot((*Q) * x);
    return std::sqrt(std::abs(Q->determinant())) * unit_ball_volume(N - 1) * factorial(N - 1) * std::pow(q, -0.5 * N);
  }
  if (const auto& F = body.facets(); F && F->rows() == N) {
    const Vec Fx = (*F) * x;
    return std::abs(F->determinant()) / Fx.prod();
  }
  return std::nullopt;
}

Vec vinberg_point(const ConvexBody& body, const Vec& x, double t, long samples, std::uint64_t seed) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidInput, "level must be positive");
  require_cone_point(body, x);
  const auto closed = characteristic_closed_form(body, x);
  const double f = closed ? *closed : characteristic_function(body, x, samples, seed).estimate;
  return std::pow(f / t, 1.0 / body.size()) * x;
}

double vinberg_level(const ConvexBody& body, long samples, std::uint64_t seed, std::optional<Vec> H) {
  const Vec h = H ? *H : body.patch();
  const CharacteristicFunction f(body, samples, seed);
  const Vec& w = body.witness();
  return std::pow(h.dot(w), body.size()) * f.value(w);
}

ConvexBody vinberg_shrink(const ConvexBody& body, double t, long samples, std::uint64_t seed, std::optional<Vec> H) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidInput, "level must be positive");
  const Vec h = H ? *H : body.patch();
  if (h.size() != body.size()) throw Error(ErrorCode::InvalidInput, "covector dimension does not match the body");
  auto f = std::make_shared<const CharacteristicFunction>(body, samples, seed);
  const int N = body.size();
  const ConvexBody base = body;
  auto g = [f, h, N](const Vec& X) {
    const double hx = h.dot(X);
    if (!(hx > 0)) return std::numeric_limits<double>::infinity();
    return std::pow(hx, N) * f->value(X);
  };
  // witness: the smallest g among the body's witness and a few interior samples
  Vec best = body.witness();
  double gbest = g(best);
  Rng rng(seed ^ 0x5bd1e995ULL);
  for (int i = 0; i < 200; ++i) {
    const Vec X = sample_interior(body, rng);
    const double gx = g(X);
    if (gx < gbest) {
      gbest = gx;
      best = X;
    }
  }
  if (!(gbest < t)) throw Error(ErrorCode::EmptySlice, "level set does not meet the body");
  auto member = [base, g, t](const Vec& X) { return base.in_cone(X) && g(X) < t; };
  return ConvexBody::oracle(body.dim(), member, body.patch(), best, true, "vinberg sublevel of " + body.name())
      .with_name("vinberg_shrink(" + body.name() + ")");
}

Vec duality_map(const ConvexBody& body, const ConvexBody& dual, const Vec& x, long samples, std::uint64_t seed) {
  if (x.size() != body.size()) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
  if (locate(body, x, body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "point is not interior");
  // the slice {psi(x) = 1} uses x as given, so Phi is homogeneous of degree -1
  const Vec X = body.patch().dot(x) > 0 ? x : Vec(-x);
  const Vec c = body.patch() / body.patch().dot(X);
  const SliceSamples s = slice_samples(dual, X, c, samples, seed, 8);
  const Vec centroid = s.sigma * s.weight / s.weight.sum();
  return body.size() * centroid;
}

Vec duality_map(const ConvexBody& body, const Vec& x, long samples, std::uint64_t seed) {
  return duality_map(body, dual_domain(body), x, samples, seed);
}

}  // namespace hilbert
