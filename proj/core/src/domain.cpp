#include "hilbert/domain.hpp"
#include "hilbert/error.hpp"
#include "hilbert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hilbert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls fn on every r-subset of {0..n-1} until fn returns false.
template <class Fn>
void for_each_subset(int n, int r, Fn&& fn) {
  if (r > n || r <= 0) return;
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    if (!fn(idx)) return;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool contains_direction(const std::vector<Vec>& list, const Vec& v, double tol) {
  for (const auto& u : list)
    if ((u - v).norm() <= tol) return true;
  return false;
}

Vec require_boundary(const ConvexBody& body, const ProjPoint& p) {
  const Vec P = body.normalize_or_throw(p);
  if (locate(body, P, std::max(body.tolerances().boundary_band, 1e-9)) != Location::Boundary)
    throw Error(ErrorCode::NotBoundary, "point is not on the boundary");
  return P;
}

Vec oriented(const ConvexBody& body, Vec eta) {
  if (eta.dot(body.witness()) < 0) eta = -eta;
  return eta / eta.norm();
}

Mat sym_from_coords(const Vec& X, int m) {
  Mat S(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      S(i, j) = X(k);
      S(j, i) = X(k);
      ++k;
    }
  return S;
}

Vec quadratic_covector(const Vec& kvec, int m) {
  Vec eta(m * (m + 1) / 2);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) eta(k++) = (i == j ? 1.0 : 2.0) * kvec(i) * kvec(j);
  return eta;
}

std::vector<Vec> sampled_supporting(const ConvexBody& body, const Vec& P, const SupportOptions& opts) {
  Rng rng(opts.seed);
  const int N = body.size();
  const double scales[] = {0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 1e-4};
  std::vector<Vec> samples;
  for (int i = 0; i < opts.samples; ++i) {
    if (i % 2 == 0) {
      samples.push_back(sample_boundary(body, rng));
    } else {
      const double eps = scales[(i / 2) % 7];
      const Vec target = P + eps * random_patch_direction(body, rng);
      samples.push_back(boundary_point_toward(body, body.witness(), target));
    }
  }
  LinearProgram lp(N);
  for (int j = 0; j < N; ++j) lp.set_free(j);
  lp.add_eq(P, 0.0);
  lp.add_eq(body.witness(), 1.0);
  for (const auto& b : samples) lp.add_ge(b, 0.0);
  std::vector<Vec> out;
  for (int k = 0; k < 2 * N + 2; ++k) {
    const LpResult r = lp.minimize(rng.normal_vector(N));
    if (r.status != LpStatus::Optimal) continue;
    const Vec eta = oriented(body, r.x);
    if (!contains_direction(out, eta, 1e-9)) out.push_back(eta);
  }
  if (out.empty()) throw Error(ErrorCode::NumericalFailure, "no supporting covector found by sampling");
  return out;
}

}  // namespace

Location locate(const ConvexBody& body, const Vec& X, double band) {
  const auto Xn = body.normalize(X);
  if (!Xn) return Location::Exterior;
  const Vec& w = body.witness();
  const Vec D = *Xn - w;
  const double L = D.norm();
  if (L <= 1e-15) return Location::Interior;
  const Interval I = body.cone_interval(w, D);
  if (!std::isfinite(I.hi)) return Location::Interior;
  const double gap = (I.hi - 1.0) * L;
  if (std::abs(gap) <= band) return Location::Boundary;
  return gap > 0 ? Location::Interior : Location::Exterior;
}

Location contains(const ConvexBody& body, const ProjPoint& p) {
  if (p.size() != body.size()) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
  return locate(body, p.coords(), body.tolerances().boundary_band);
}

Chord chord(const ConvexBody& body, const ProjPoint& a, const Vec& dir) {
  const Vec A = body.normalize_or_throw(a);
  if (locate(body, A, body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "chord base point must be interior");
  Vec D;
  if (dir.size() == body.dim()) D = body.chart_basis() * dir;
  else if (dir.size() == body.size()) D = dir - body.patch().dot(dir) * A;
  else throw Error(ErrorCode::InvalidInput, "direction has the wrong size");
  if (!(D.norm() > 1e-14)) throw Error(ErrorCode::InvalidInput, "direction is zero in the patch");
  D.normalize();
  const Interval I = body.cone_interval(A, D);
  Chord c;
  c.base = A;
  c.direction = D;
  c.t_minus = I.lo;
  c.t_plus = I.hi;
  c.x_minus = std::isfinite(I.lo) ? ProjPoint(A + I.lo * D) : ProjPoint(-D);
  c.x_plus = std::isfinite(I.hi) ? ProjPoint(A + I.hi * D) : ProjPoint(D);
  return c;
}

std::vector<ProjHyperplane> supporting_cone(const ConvexBody& body, const ProjPoint& p, const SupportOptions& opts) {
  const Vec P = require_boundary(body, p);
  std::vector<Vec> gens;
  if (body.quadratic_form()) {
    gens.push_back(oriented(body, -(*body.quadratic_form()) * P));
  } else if (body.facets()) {
    const Mat& F = *body.facets();
    const Vec Pu = P.normalized();
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
      const Vec f = F.row(i).transpose().normalized();
      if (std::abs(f.dot(Pu)) <= 1e-8) {
        const Vec eta = oriented(body, f);
        if (!contains_direction(gens, eta, 1e-9)) gens.push_back(eta);
      }
    }
  } else if (body.kind() == BodyKind::PosCone) {
    const int m = body.pos_cone_size();
    Eigen::SelfAdjointEigenSolver<Mat> es(sym_from_coords(P, m));
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<Vec> ker;
    for (int i = 0; i < m; ++i)
      if (es.eigenvalues()(i) <= 1e-9 * top) ker.push_back(es.eigenvectors().col(i));
    for (size_t a = 0; a < ker.size(); ++a) {
      gens.push_back(oriented(body, quadratic_covector(ker[a], m)));
      for (size_t b = a + 1; b < ker.size(); ++b) {
        gens.push_back(oriented(body, quadratic_covector((ker[a] + ker[b]) / std::sqrt(2.0), m)));
        gens.push_back(oriented(body, quadratic_covector((ker[a] - ker[b]) / std::sqrt(2.0), m)));
      }
    }
  } else {
    gens = sampled_supporting(body, P, opts);
  }
  if (gens.empty()) throw Error(ErrorCode::NumericalFailure, "no supporting covector found");
  std::vector<ProjHyperplane> out;
  for (const auto& g : gens) out.emplace_back(g);
  return out;
}

BoundaryProbe boundary_probe(const ConvexBody& body, const ProjPoint& p, int samples, std::uint64_t seed,
                             double angular_tol) {
  const Vec P = require_boundary(body, p);
  BoundaryProbe out;
  const auto gens = supporting_cone(body, p, SupportOptions{std::max(samples, 200) * 2, seed});
  double spread = 0.0;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j) {
      const double c = std::clamp(gens[i].covector().normalized().dot(gens[j].covector().normalized()), -1.0, 1.0);
      spread = std::max(spread, std::acos(c));
    }
  out.angular_spread = spread;
  out.is_C1 = spread <= angular_tol;

  Rng rng(derive_seed(seed, 1));
  const double scales[] = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  for (int i = 0; i < samples; ++i) {
    const double eps = scales[i % 6];
    const Vec q = boundary_point_toward(body, body.witness(), P + eps * random_patch_direction(body, rng));
    if ((q - P).norm() < 1e-9) continue;
    if (locate(body, 0.5 * (P + q), 1e-8) == Location::Boundary) ++out.segments_found;
  }
  out.is_strictly_convex_point = out.segments_found == 0;
  return out;
}

DirectionSpace space_of_directions(const ConvexBody& body, const ProjPoint& p) {
  const Vec P = require_boundary(body, p);
  const int N = body.size();
  const Mat B = complement_basis(P);
  const auto gens = supporting_cone(body, p);
  Mat G(static_cast<Eigen::Index>(gens.size()), N);
  Vec eta = Vec::Zero(N);
  for (size_t i = 0; i < gens.size(); ++i) {
    G.row(static_cast<Eigen::Index>(i)) = gens[i].covector().normalized().transpose();
    eta += gens[i].covector().normalized();
  }
  const int rank = numerical_rank(G * B, 1e-6);
  const Vec patch = B.transpose() * eta;
  const Vec witness = B.transpose() * body.witness();
  const ConvexBody parent = body;
  auto member = [parent, P, B](const Vec& y) {
    Vec V = B * y;
    V *= P.norm() / V.norm();
    for (int k = 0; k <= 52; ++k)
      if (parent.in_cone(P + std::ldexp(1.0, -k) * V)) return true;
    return false;
  };
  DirectionSpace out{ConvexBody::oracle(N - 2, member, patch, witness, rank == N - 1, "space of directions"), B,
                     rank <= 1};
  out.body = out.body.with_name("space_of_directions");
  return out;
}

Vec random_patch_direction(const ConvexBody& body, Rng& rng) {
  return body.chart_basis() * rng.unit_vector(body.dim());
}

Vec sample_interior(const ConvexBody& body, Rng& rng, int steps) {
  Vec x = body.witness();
  for (int s = 0; s < steps; ++s) {
    const Vec D = random_patch_direction(body, rng);
    const Interval I = body.cone_interval(x, D);
    const double lo = std::isfinite(I.lo) ? I.lo : -10.0;
    const double hi = std::isfinite(I.hi) ? I.hi : 10.0;
    const double u = rng.uniform(1e-6, 1.0 - 1e-6);
    x = x + (lo + (hi - lo) * u) * D;
  }
  return x;
}

Vec boundary_point_toward(const ConvexBody& body, const Vec& from, const Vec& toward) {
  const auto T = body.normalize(toward);
  Vec D = (T ? *T : toward) - from;
  if (D.norm() < 1e-15) D = body.chart_basis().col(0);
  const Interval I = body.cone_interval(from, D);
  if (!std::isfinite(I.hi)) throw Error(ErrorCode::NumericalFailure, "ray does not leave the body");
  return from + I.hi * D;
}

Vec sample_boundary(const ConvexBody& body, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Vec D = random_patch_direction(body, rng);
    const Interval I = body.cone_interval(body.witness(), D);
    if (std::isfinite(I.hi)) return body.witness() + I.hi * D;
  }
  throw Error(ErrorCode::NumericalFailure, "no bounded ray found");
}

Mat enumerate_facets(const Mat& vertices, const Vec& interior) {
  const int N = static_cast<int>(vertices.rows());
  const int k = static_cast<int>(vertices.cols());
  Mat Vn(N, k);
  for (int j = 0; j < k; ++j) Vn.col(j) = vertices.col(j).normalized();
  std::vector<Vec> facets;
  for_each_subset(k, N - 1, [&](const std::vector<int>& idx) {
    Mat S(N - 1, N);
    for (int i = 0; i < N - 1; ++i) S.row(i) = Vn.col(idx[i]).transpose();
    const Mat K = null_space(S, 1e-10);
    if (K.cols() != 1) return true;
    Vec eta = K.col(0);
    if (eta.dot(interior) < 0) eta = -eta;
    if ((Vn.transpose() * eta).minCoeff() < -1e-9) return true;
    if (!contains_direction(facets, eta, 1e-8)) facets.push_back(eta);
    return true;
  });
  Mat F(static_cast<Eigen::Index>(facets.size()), N);
  for (size_t i = 0; i < facets.size(); ++i) F.row(static_cast<Eigen::Index>(i)) = facets[i].transpose();
  return F;
}

Mat enumerate_vertices(const Mat& facets, const Vec& patch) {
  const int N = static_cast<int>(facets.cols());
  const int m = static_cast<int>(facets.rows());
  Mat Fn(m, N);
  for (int i = 0; i < m; ++i) Fn.row(i) = facets.row(i).normalized();
  std::vector<Vec> verts;
  for_each_subset(m, N - 1, [&](const std::vector<int>& idx) {
    Mat S(N - 1, N);
    for (int i = 0; i < N - 1; ++i) S.row(i) = Fn.row(idx[i]);
    const Mat K = null_space(S, 1e-10);
    if (K.cols() != 1) return true;
    Vec X = K.col(0);
    const double ph = patch.dot(X);
    if (std::abs(ph) < 1e-12) return true;
    X /= ph;
    if ((Fn * X.normalized()).minCoeff() < -1e-9) return true;
    bool dup = false;
    for (const auto& v : verts)
      if ((v - X).norm() <= 1e-8 * std::max(1.0, X.norm())) dup = true;
    if (!dup) verts.push_back(X);
    return true;
  });
  Mat V(N, static_cast<Eigen::Index>(verts.size()));
  for (size_t j = 0; j < verts.size(); ++j) V.col(static_cast<Eigen::Index>(j)) = verts[j];
  return V;
}

Mat polytope_vertices(const ConvexBody& body) {
  if (body.vertices()) return *body.vertices();
  if (body.facets()) return enumerate_vertices(*body.facets(), body.patch());
  throw Error(ErrorCode::InvalidInput, "body is not a polytope");
}

}  // namespace hilbert
