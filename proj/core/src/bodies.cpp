#include "hilbert/domain.hpp"
#include "hilbert/error.hpp"
#include "hilbert/lp.hpp"
#include "hilbert/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hilbert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection-based interval for a membership predicate on the cone.
Interval bisect_interval(const std::function<bool(const Vec&)>& member, const Vec& X0, const Vec& D,
                         const Tolerances& tol) {
  const double dn = D.norm();
  if (dn == 0.0) return {-kInf, kInf};
  const double start = 0.0625 * X0.norm() / dn;
  auto side = [&](double sign) {
    double lo = 0.0, hi = start;
    if (member(X0 + sign * hi * D)) {
      lo = hi;
      for (;;) {
        hi *= 2.0;
        if (hi > 1e15 * start) return kInf;
        if (!member(X0 + sign * hi * D)) break;
        lo = hi;
      }
    } else {
      // shrink until inside
      int k = 0;
      while (!member(X0 + sign * hi * D)) {
        hi *= 0.5;
        if (++k > 200) throw Error(ErrorCode::NumericalFailure, "membership oracle cannot bracket the boundary");
      }
      lo = hi;
      hi *= 2.0;
    }
    for (int i = 0; i < tol.bisection_iters; ++i) {
      if (hi - lo <= tol.bisection_rel * hi) break;
      const double mid = 0.5 * (lo + hi);
      if (member(X0 + sign * mid * D)) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double hi = side(1.0);
  const double lo = side(-1.0);
  return {-lo, hi};
}

class EllipsoidModel : public detail::BodyModel {
 public:
  explicit EllipsoidModel(Mat Q) : Q_(std::move(Q)) {}
  bool in_cone(const Vec& X) const override {
    const double q = X.dot(Q_ * X);
    return q < -1e-15 * X.squaredNorm() * Q_.cwiseAbs().maxCoeff();
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    const Vec QD = Q_ * D;
    const double a = D.dot(QD), b = X0.dot(QD), c = X0.dot(Q_ * X0);
    // q(t) = a t^2 + 2 b t + c, c < 0
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (std::abs(a) <= 1e-15 * scale) {
      if (std::abs(b) <= 1e-15 * scale) return {-kInf, kInf};
      const double r = -c / (2.0 * b);
      return b > 0 ? Interval{-kInf, r} : Interval{r, kInf};
    }
    const double disc = b * b - a * c;
    if (disc < 0.0) return {-kInf, kInf};
    const double sq = std::sqrt(disc);
    const double qq = -(b + std::copysign(sq, b));
    double r1 = qq / a, r2 = c / qq;
    if (r1 > r2) std::swap(r1, r2);
    if (a > 0) return {r1, r2};
    if (r1 > 0) return {-kInf, r1};
    return {r2, kInf};
  }

 private:
  Mat Q_;
};

class FacetModel : public detail::BodyModel {
 public:
  explicit FacetModel(Mat F) : F_(std::move(F)) {
    for (Eigen::Index i = 0; i < F_.rows(); ++i) F_.row(i).normalize();
  }
  bool in_cone(const Vec& X) const override {
    const double tol = 1e-15 * X.norm();
    return ((F_ * X).array() > tol).all();
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    const Vec a = F_ * X0, b = F_ * D;
    double lo = -kInf, hi = kInf;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (b(i) < 0) hi = std::min(hi, -a(i) / b(i));
      else if (b(i) > 0) lo = std::max(lo, -a(i) / b(i));
    }
    return {lo, hi};
  }

 private:
  Mat F_;
};

class VertexLpModel : public detail::BodyModel {
 public:
  VertexLpModel(Mat V, Vec center) : V_(std::move(V)), center_(std::move(center)) {
    for (Eigen::Index j = 0; j < V_.cols(); ++j) V_.col(j).normalize();
    center_.normalize();
  }
  bool in_cone(const Vec& X) const override {
    // X = V λ + ε c, λ >= 0, maximize ε
    const int k = static_cast<int>(V_.cols()), N = static_cast<int>(V_.rows());
    LinearProgram lp(k + 1);
    lp.set_free(k);
    const Vec Xn = X.normalized();
    for (int i = 0; i < N; ++i) {
      Vec row(k + 1);
      row << V_.row(i).transpose(), center_(i);
      lp.add_eq(row, Xn(i));
    }
    Vec c = Vec::Zero(k + 1);
    c(k) = 1.0;
    lp.add_le(c, 1.0);
    const LpResult r = lp.maximize(c);
    return r.status == LpStatus::Optimal && r.value > 1e-11;
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    const int k = static_cast<int>(V_.cols()), N = static_cast<int>(V_.rows());
    LinearProgram lp(k + 1);
    lp.set_free(k);
    for (int i = 0; i < N; ++i) {
      Vec row(k + 1);
      row << V_.row(i).transpose(), -D(i);
      lp.add_eq(row, X0(i));
    }
    Vec c = Vec::Zero(k + 1);
    c(k) = 1.0;
    const LpResult up = lp.maximize(c);
    const LpResult down = lp.minimize(c);
    if (up.status == LpStatus::Infeasible || down.status == LpStatus::Infeasible)
      throw Error(ErrorCode::NotInterior, "base point is outside the vertex hull");
    return {down.status == LpStatus::Unbounded ? -kInf : down.value,
            up.status == LpStatus::Unbounded ? kInf : up.value};
  }

 private:
  Mat V_;
  Vec center_;
};

// Symmetric matrix from upper-triangle coordinates.
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

class PosConeModel : public detail::BodyModel {
 public:
  explicit PosConeModel(int m) : m_(m) {}
  bool in_cone(const Vec& X) const override {
    const Mat S = sym_from_coords(X, m_);
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    const Mat A = sym_from_coords(X0, m_), B = sym_from_coords(D, m_);
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotInterior, "base matrix is not positive definite");
    const Mat L = llt.matrixL();
    const Mat M = L.triangularView<Eigen::Lower>().solve(
        L.triangularView<Eigen::Lower>().solve(B).transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    double lo = -kInf, hi = kInf;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double mu = es.eigenvalues()(i);
      if (mu < 0) hi = std::min(hi, -1.0 / mu);
      else if (mu > 0) lo = std::max(lo, -1.0 / mu);
    }
    return {lo, hi};
  }

 private:
  int m_;
};

class JoinModel : public detail::BodyModel {
 public:
  JoinModel(ConvexBody base, Mat M) : base_(std::move(base)), Minv_(M.inverse()) {}
  bool in_cone(const Vec& X) const override {
    const Vec Z = Minv_ * X;
    const Eigen::Index n = Z.size() - 1;
    return Z(n) > 1e-15 * Z.norm() && base_.in_cone(Z.head(n));
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    const Vec Z0 = Minv_ * X0, DZ = Minv_ * D;
    const Eigen::Index n = Z0.size() - 1;
    Interval I = base_.cone_interval(Z0.head(n), DZ.head(n));
    const double s0 = Z0(n), ds = DZ(n);
    if (ds < 0) I.hi = std::min(I.hi, -s0 / ds);
    else if (ds > 0) I.lo = std::max(I.lo, -s0 / ds);
    return I;
  }

 private:
  ConvexBody base_;
  Mat Minv_;
};

class OracleModel : public detail::BodyModel {
 public:
  OracleModel(ConvexBody::Predicate member, Vec patch, Tolerances tol)
      : member_(std::move(member)), patch_(std::move(patch)), tol_(tol) {}
  bool in_cone(const Vec& X) const override {
    const double ph = patch_.dot(X);
    if (!(ph > 1e-14 * X.norm() * patch_.norm())) return false;
    return member_(X / ph);
  }
  Interval cone_interval(const Vec& X0, const Vec& D) const override {
    return bisect_interval([this](const Vec& X) { return in_cone(X); }, X0, D, tol_);
  }

 private:
  ConvexBody::Predicate member_;
  Vec patch_;
  Tolerances tol_;
};

Vec row_normalized_sum(const Mat& F) {
  Vec s = Vec::Zero(F.cols());
  for (Eigen::Index i = 0; i < F.rows(); ++i) s += F.row(i).transpose().normalized();
  return s;
}

}  // namespace

std::string_view to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::PolytopeH: return "polytope_h";
    case BodyKind::PolytopeV: return "polytope_v";
    case BodyKind::Simplex: return "simplex";
    case BodyKind::ConeJoin: return "cone_join";
    case BodyKind::PosCone: return "pos_cone";
    case BodyKind::OrbitHull: return "orbit_hull";
    case BodyKind::Oracle: return "oracle";
  }
  return "oracle";
}

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::Interior: return "interior";
    case Location::Boundary: return "boundary";
    case Location::Exterior: return "exterior";
  }
  return "exterior";
}

void ConvexBody::finish(std::optional<Vec> patch, std::optional<Vec> witness) {
  if (!patch || patch->size() != size_ || patch->norm() == 0.0)
    throw Error(ErrorCode::InvalidInput, "body needs a nonzero patch covector of matching size");
  patch_ = *patch;
  origin_ = patch_ / patch_.squaredNorm();
  basis_ = complement_basis(patch_);
  if (!witness || witness->size() != size_) throw Error(ErrorCode::InvalidInput, "body needs a witness point");
  const double ph = patch_.dot(*witness);
  if (!(ph > 0.0)) throw Error(ErrorCode::InvalidInput, "witness must lie on the positive side of the patch");
  witness_ = *witness / ph;
  if (!model_->in_cone(witness_)) throw Error(ErrorCode::InvalidInput, "witness is not an interior point");
}

Vec ConvexBody::to_chart(const Vec& X) const { return basis_.transpose() * (X - origin_); }

Vec ConvexBody::from_chart(const Vec& y) const { return origin_ + basis_ * y; }

std::optional<Vec> ConvexBody::normalize(const Vec& X) const {
  const double ph = patch_.dot(X);
  if (std::abs(ph) <= 1e-14 * X.norm() * patch_.norm()) return std::nullopt;
  return Vec(X / ph);
}

Vec ConvexBody::normalize_or_throw(const ProjPoint& p) const {
  if (p.size() != size_) throw Error(ErrorCode::InvalidInput, "point dimension does not match the body");
  auto X = normalize(p.coords());
  if (!X) throw Error(ErrorCode::NotInterior, "point lies on the patch hyperplane");
  return *X;
}

ConvexBody ConvexBody::with_name(std::string name) const {
  ConvexBody b = *this;
  b.name_ = std::move(name);
  return b;
}

ConvexBody ConvexBody::with_provenance(nlohmann::json provenance) const {
  ConvexBody b = *this;
  b.provenance_ = std::move(provenance);
  return b;
}

bool ConvexBody::in_cone(const Vec& X) const { return model_->in_cone(X); }

Interval ConvexBody::cone_interval(const Vec& X0, const Vec& D) const { return model_->cone_interval(X0, D); }

ConvexBody ConvexBody::ellipsoid(const Mat& Q, std::optional<Vec> patch, std::optional<Vec> witness) {
  if (Q.rows() != Q.cols() || Q.rows() < 2 || !Q.allFinite())
    throw Error(ErrorCode::InvalidInput, "quadratic form must be square");
  const Mat S = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const Vec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const int neg = static_cast<int>((ev.array() < -1e-12 * scale).count());
  const int pos = static_cast<int>((ev.array() > 1e-12 * scale).count());
  if (neg != 1 || pos != S.rows() - 1)
    throw Error(ErrorCode::InvalidInput, "quadratic form must have signature (n,1)");
  ConvexBody b;
  b.size_ = static_cast<int>(S.rows());
  b.kind_ = BodyKind::Ellipsoid;
  b.name_ = "ellipsoid";
  b.Q_ = S;
  b.model_ = std::make_shared<EllipsoidModel>(S);
  Vec w = witness ? *witness : Vec(es.eigenvectors().col(0));
  if (!patch) {
    Vec phi = -S * w;
    patch = phi;
  }
  if (patch->dot(w) < 0) w = -w;
  // patch must lie in the dual cone {η : η^T Q^{-1} η < 0}
  const Vec& phi = *patch;
  if (!(phi.dot(S.partialPivLu().solve(phi)) < 0.0))
    throw Error(ErrorCode::InvalidInput, "patch covector does not separate the ellipsoid from a hyperplane");
  b.params_ = {{"form", to_json(S)}};
  b.finish(patch, w);
  return b;
}

ConvexBody ConvexBody::polytope_h(const Mat& facets, std::optional<Vec> patch, std::optional<Vec> witness) {
  const int N = static_cast<int>(facets.cols());
  if (facets.rows() < N || N < 2 || !facets.allFinite())
    throw Error(ErrorCode::InvalidInput, "need at least n+1 facet covectors");
  if (numerical_rank(facets, 1e-10 * facets.cwiseAbs().maxCoeff()) < N)
    throw Error(ErrorCode::InvalidInput, "facets do not cut out a properly convex cone");
  ConvexBody b;
  b.size_ = N;
  b.kind_ = BodyKind::PolytopeH;
  b.name_ = "polytope_h";
  b.F_ = facets;
  b.model_ = std::make_shared<FacetModel>(facets);
  if (!patch) patch = row_normalized_sum(facets);
  if (!witness) {
    // Chebyshev-style center: maximize s with F̂ X >= s, patch(X) = 1, |X_i| bounded
    LinearProgram lp(N + 1);
    for (int j = 0; j < N; ++j) lp.set_free(j);
    for (Eigen::Index i = 0; i < facets.rows(); ++i) {
      Vec row(N + 1);
      row << -facets.row(i).transpose().normalized(), 1.0;
      lp.add_le(row, 0.0);
    }
    Vec prow(N + 1);
    prow << *patch, 0.0;
    lp.add_eq(prow, 1.0);
    Vec c = Vec::Zero(N + 1);
    c(N) = 1.0;
    lp.add_le(c, 1.0);
    const LpResult r = lp.maximize(c);
    if (r.status != LpStatus::Optimal || r.value <= 1e-12)
      throw Error(ErrorCode::InvalidInput, "facet system has empty interior");
    witness = Vec(r.x.head(N));
  }
  // the patch must be positive on the closed cone: min over the compact slice {F X >= 0, Σ f̂_i(X) = 1}
  {
    LinearProgram lp(N);
    for (int j = 0; j < N; ++j) lp.set_free(j);
    for (Eigen::Index i = 0; i < facets.rows(); ++i) lp.add_ge(facets.row(i).transpose(), 0.0);
    lp.add_eq(row_normalized_sum(facets), 1.0);
    const LpResult r = lp.minimize(*patch);
    if (r.status != LpStatus::Optimal || r.value <= 1e-12)
      throw Error(ErrorCode::InvalidInput, "patch covector is not positive on the closed cone");
  }
  b.params_ = {{"facets", to_json(facets)}};
  b.finish(patch, witness);
  return b;
}

ConvexBody ConvexBody::simplex(const Mat& facets, std::optional<Vec> patch, std::optional<Vec> witness) {
  if (facets.rows() != facets.cols()) throw Error(ErrorCode::InvalidInput, "a simplex has exactly n+1 facets");
  ConvexBody b = polytope_h(facets, patch, witness);
  b.kind_ = BodyKind::Simplex;
  b.name_ = "simplex";
  return b;
}

ConvexBody ConvexBody::polytope_v(const Mat& vertices, std::optional<Vec> patch, std::optional<Vec> witness) {
  const int N = static_cast<int>(vertices.rows());
  const int k = static_cast<int>(vertices.cols());
  if (k < N || N < 2 || !vertices.allFinite()) throw Error(ErrorCode::InvalidInput, "need at least n+1 vertices");
  if (numerical_rank(vertices, 1e-10 * vertices.cwiseAbs().maxCoeff()) < N)
    throw Error(ErrorCode::InvalidInput, "vertices do not span the space");
  if (!patch) {
    // find η with η(v̂_j) >= s maximal, |η_i| <= 1
    LinearProgram lp(N + 1);
    for (int j = 0; j < N; ++j) lp.set_free(j);
    for (int j = 0; j < k; ++j) {
      Vec row(N + 1);
      row << -vertices.col(j).normalized(), 1.0;
      lp.add_le(row, 0.0);
    }
    for (int i = 0; i < N; ++i) {
      Vec e = Vec::Zero(N + 1);
      e(i) = 1.0;
      lp.add_le(e, 1.0);
      lp.add_ge(e, -1.0);
    }
    Vec c = Vec::Zero(N + 1);
    c(N) = 1.0;
    const LpResult r = lp.maximize(c);
    if (r.status != LpStatus::Optimal || r.value <= 1e-12)
      throw Error(ErrorCode::InvalidInput, "vertex set is not contained in an affine patch");
    patch = Vec(r.x.head(N));
  }
  Mat Vn(N, k);
  for (int j = 0; j < k; ++j) {
    const double ph = patch->dot(vertices.col(j));
    if (!(ph > 0.0)) throw Error(ErrorCode::InvalidInput, "vertex lifts must be positive on the patch");
    Vn.col(j) = vertices.col(j) / ph;
  }
  if (!witness) witness = Vec(Vn.rowwise().mean());
  ConvexBody b;
  b.size_ = N;
  b.kind_ = BodyKind::PolytopeV;
  b.name_ = "polytope_v";
  b.V_ = Vn;
  // facets by brute force when small enough, else LP-based oracle
  double combos = 1.0;
  for (int i = 0; i < N - 1; ++i) combos *= static_cast<double>(k - i) / (i + 1);
  if (combos <= 2e5) {
    const Mat F = enumerate_facets(Vn, *witness);
    b.F_ = F;
    b.model_ = std::make_shared<FacetModel>(F);
  } else {
    b.model_ = std::make_shared<VertexLpModel>(Vn, *witness);
  }
  b.params_ = {{"vertices", to_json(Mat(Vn.transpose()))}};
  b.finish(patch, witness);
  return b;
}

ConvexBody ConvexBody::orbit_hull(const Mat& vertices, const Mat& facets, std::optional<Vec> patch,
                                  std::optional<Vec> witness) {
  const int N = static_cast<int>(vertices.rows());
  if (!patch) throw Error(ErrorCode::InvalidInput, "orbit hull needs a patch covector");
  Mat Vn(N, vertices.cols());
  for (Eigen::Index j = 0; j < vertices.cols(); ++j) Vn.col(j) = vertices.col(j) / patch->dot(vertices.col(j));
  if (!witness) witness = Vec(Vn.rowwise().mean());
  ConvexBody b;
  b.size_ = N;
  b.kind_ = BodyKind::OrbitHull;
  b.name_ = "orbit_hull";
  b.V_ = Vn;
  // validate: every facet is nonnegative on every vertex and positive on the witness
  bool valid = facets.cols() == N && facets.rows() >= N;
  Mat F = facets;
  for (Eigen::Index i = 0; valid && i < F.rows(); ++i) {
    Vec f = F.row(i).transpose().normalized();
    if (f.dot(*witness) < 0) f = -f;
    F.row(i) = f.transpose();
    for (Eigen::Index j = 0; j < Vn.cols(); ++j)
      if (f.dot(Vn.col(j).normalized()) < -1e-9) valid = false;
  }
  if (valid) {
    b.F_ = F;
    b.model_ = std::make_shared<FacetModel>(F);
  } else {
    b.model_ = std::make_shared<VertexLpModel>(Vn, *witness);
  }
  b.params_ = {{"vertices", to_json(Mat(Vn.transpose()))}, {"facets", to_json(F)}, {"facets_validated", valid}};
  b.finish(patch, witness);
  return b;
}

ConvexBody ConvexBody::pos_cone(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidInput, "pos_cone needs m >= 2");
  const int N = m * (m + 1) / 2;
  ConvexBody b;
  b.size_ = N;
  b.kind_ = BodyKind::PosCone;
  b.name_ = "pos_cone";
  b.pos_m_ = m;
  b.model_ = std::make_shared<PosConeModel>(m);
  Vec trace = Vec::Zero(N), id = Vec::Zero(N);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (i == j) {
        trace(k) = 1.0;
        id(k) = 1.0;
      }
      ++k;
    }
  b.params_ = {{"m", m}};
  b.finish(trace, id);
  return b;
}

ConvexBody ConvexBody::cone_join(const ConvexBody& base, const Mat& embed, const Vec& apex) {
  const int N = base.size() + 1;
  if (embed.rows() != N || embed.cols() != base.size() || apex.size() != N)
    throw Error(ErrorCode::InvalidInput, "join embedding has the wrong shape");
  Mat M(N, N);
  M << embed, apex;
  if (std::abs(M.determinant()) < 1e-12) throw Error(ErrorCode::InvalidInput, "apex lies in the base hyperplane");
  ConvexBody b;
  b.size_ = N;
  b.kind_ = BodyKind::ConeJoin;
  b.name_ = "cone_join";
  b.model_ = std::make_shared<JoinModel>(base, M);
  Vec zpatch(N);
  zpatch << base.patch(), 1.0;
  const Vec patch = M.inverse().transpose() * zpatch;
  Vec zw(N);
  zw << base.witness(), 1.0;
  b.params_ = {{"base", scene_from_body(base)}, {"embedding", to_json(embed)}, {"apex", to_json(apex)}};
  b.finish(patch, Vec(M * zw));
  return b;
}

ConvexBody ConvexBody::oracle(int dim, Predicate member, const Vec& patch, const Vec& witness, bool properly_convex,
                              std::string description) {
  ConvexBody b;
  b.size_ = dim + 1;
  b.kind_ = BodyKind::Oracle;
  b.name_ = "oracle";
  b.properly_convex_ = properly_convex;
  b.model_ = std::make_shared<OracleModel>(std::move(member), patch, b.tol_);
  b.params_ = {{"description", std::move(description)}};
  b.finish(patch, witness);
  return b;
}

}  // namespace hilbert
