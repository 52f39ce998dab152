#include "hilbert/groups.hpp"

#include "hilbert/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace hilbert {

namespace {

double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

// Sign-invariant fingerprint; |Δfp| <= max weight * sum |ΔM_ij|.
double fingerprint(const Mat& M) {
  double s = 0.0;
  std::uint64_t h = 0x2545F4914F6CDD1DULL;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      h = splitmix64(h);
      s += (0.5 + static_cast<double>(h >> 11) * 0x1.0p-53) * M(i, j);
    }
  return std::abs(s);
}

class MapIndex {
 public:
  explicit MapIndex(double tol) : tol_(tol) {}
  // index of a stored map equal to A, or -1
  int find(const std::vector<ProjMap>& store, const ProjMap& A) const {
    const Mat& M = A.matrix();
    const double fp = fingerprint(M);
    const double window = 1.5 * tol_ * std::max(1.0, max_abs(M)) * static_cast<double>(M.size());
    for (auto it = index_.lower_bound(fp - window); it != index_.end() && it->first <= fp + window; ++it)
      if (same_map(store[static_cast<size_t>(it->second)], A, tol_)) return it->second;
    return -1;
  }
  void add(const ProjMap& A, int i) { index_.emplace(fingerprint(A.matrix()), i); }

 private:
  double tol_;
  std::multimap<double, int> index_;
};

std::vector<std::pair<double, Mat>> positive_eigenspaces(const Mat& B) {
  std::vector<std::pair<double, Mat>> out;
  const Eigen::Index N = B.rows();
  for (const auto& c : spectrum(B).eigenvalues) {
    if (c.value.imag() != 0.0 || !(c.value.real() > 0)) continue;
    const Mat K = null_space(B - c.value.real() * Mat::Identity(N, N), std::max(1e-9, 100.0 * c.spread));
    if (K.cols() > 0) out.emplace_back(c.value.real(), K);
  }
  return out;
}

// Subspaces fixed (as sets of lines) by every map.
std::vector<Mat> shared_eigenspaces(const std::vector<Mat>& mats) {
  std::vector<Mat> cur;
  for (auto& e : positive_eigenspaces(mats.front())) cur.push_back(e.second);
  for (size_t k = 1; k < mats.size(); ++k) {
    std::vector<Mat> next;
    for (const auto& S : cur)
      for (const auto& e : positive_eigenspaces(mats[k])) {
        const Mat I = intersect_subspaces(S, e.second, 1e-7);
        if (I.cols() > 0) next.push_back(I);
      }
    cur = std::move(next);
  }
  return cur;
}

std::vector<Vec> subspace_candidates(const Mat& S, const Vec& probe) {
  std::vector<Vec> out;
  const Vec proj = S * (S.transpose() * probe);
  if (proj.norm() > 1e-12) out.push_back(proj);
  for (Eigen::Index j = 0; j < S.cols(); ++j) {
    out.push_back(S.col(j));
    out.push_back(-S.col(j));
  }
  return out;
}

bool supports(const ConvexBody& body, const Vec& eta) {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const Vec b = sample_boundary(body, rng);
    if (eta.dot(b) < -1e-8 * eta.norm() * b.norm()) return false;
  }
  return eta.dot(body.witness()) > 0;
}

void require_isometries(const ConvexBody& body, const std::vector<ProjMap>& maps) {
  for (const auto& g : maps)
    if (!preserves(body, g)) throw Error(ErrorCode::NotAnIsometry, "generator does not preserve the body");
}

}  // namespace

Mat canonical_matrix(const ProjMap& A) {
  Mat M = A.matrix();
  const double m = max_abs(M);
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      if (std::abs(M(i, j)) > 1e-6 * m) return M(i, j) < 0 ? Mat(-M) : M;
  return M;
}

bool same_map(const ProjMap& A, const ProjMap& B, double tol) {
  const Mat& a = A.matrix();
  const Mat& b = B.matrix();
  if (a.rows() != b.rows()) return false;
  const double t = tol * std::max(1.0, std::max(max_abs(a), max_abs(b)));
  return (a - b).cwiseAbs().maxCoeff() <= t || (a + b).cwiseAbs().maxCoeff() <= t;
}

GroupBall enumerate_ball(const std::vector<ProjMap>& generators, int L, const BallOptions& opts) {
  if (L < 0) throw Error(ErrorCode::InvalidInput, "cutoff must be nonnegative");
  if (generators.empty()) throw Error(ErrorCode::InvalidInput, "need at least one generator");
  const int N = generators.front().size();
  GroupBall ball;
  ball.L = L;
  for (const auto& g : generators) {
    if (g.size() != N) throw Error(ErrorCode::InvalidInput, "generators have different sizes");
    for (const ProjMap& h : {g, g.inverse()}) {
      bool dup = false;
      for (const auto& k : ball.generators) dup = dup || same_map(h, k, opts.dedup_tol);
      if (!dup) ball.generators.push_back(h);
    }
  }
  MapIndex index(opts.dedup_tol);
  ball.elements.push_back(ProjMap::identity(N));
  ball.lengths.push_back(0);
  index.add(ball.elements.front(), 0);
  std::vector<int> frontier{0};
  for (int len = 1; len <= L && !frontier.empty(); ++len) {
    std::vector<int> next;
    for (int idx : frontier) {
      for (const auto& g : ball.generators) {
        ProjMap P = g * ball.elements[static_cast<size_t>(idx)];
        if (index.find(ball.elements, P) >= 0) continue;
        const int at = static_cast<int>(ball.elements.size());
        ball.elements.push_back(P);
        ball.lengths.push_back(len);
        index.add(ball.elements.back(), at);
        next.push_back(at);
        if (static_cast<long>(ball.elements.size()) > opts.max_elements)
          throw Error(ErrorCode::ExplosionGuard, "word ball exceeds the element budget");
      }
    }
    frontier = std::move(next);
  }
  return ball;
}

double injectivity_radius_estimate(const ConvexBody& body, const GroupBall& ball, const Vec& x) {
  require_isometries(body, ball.generators);
  const Vec X = body.normalize_or_throw(ProjPoint(x));
  if (locate(body, X, body.tolerances().boundary_band) != Location::Interior)
    throw Error(ErrorCode::NotInterior, "base point is not interior");
  const ProjMap id = ProjMap::identity(body.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : ball.elements) {
    if (same_map(g, id)) continue;
    best = std::min(best, displacement_at(body, g.matrix(), X));
  }
  return 0.5 * best;
}

ShortSubgroup short_subgroup(const ConvexBody& body, const GroupBall& ball, const Vec& x, double mu) {
  require_isometries(body, ball.generators);
  const Vec X = body.normalize_or_throw(ProjPoint(x));
  const ProjMap id = ProjMap::identity(body.size());
  ShortSubgroup out;
  for (const auto& g : ball.elements)
    if (!same_map(g, id) && displacement_at(body, g.matrix(), X) < mu) out.short_elements.push_back(g);
  if (out.short_elements.empty()) {
    out.ball.elements.push_back(id);
    out.ball.lengths.push_back(0);
    out.ball.L = ball.L;
    return out;
  }
  for (int L = ball.L; L >= 1; --L) {
    try {
      out.ball = enumerate_ball(out.short_elements, L, BallOptions{20000, 1e-9});
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExplosionGuard || L == 1) throw;
    }
  }
  for (size_t i = 1; i < out.ball.elements.size(); ++i) {
    const IsometryKind k = classify(body, out.ball.elements[i]).kind;
    out.kinds.push_back(k);
    if (k == IsometryKind::Hyperbolic) out.all_non_hyperbolic = false;
  }
  return out;
}

CommonFixedPoint common_fixed_point(const ConvexBody& body, const std::vector<ProjMap>& maps) {
  if (maps.empty()) throw Error(ErrorCode::InvalidInput, "need at least one map");
  std::vector<Mat> mats;
  for (const auto& A : maps) mats.push_back(cone_normalized(body, A));
  const auto spaces = shared_eigenspaces(mats);
  std::optional<Vec> boundary;
  for (const auto& S : spaces) {
    for (const auto& X : subspace_candidates(S, body.witness())) {
      const Location loc = locate(body, X, 1e-7);
      if (loc == Location::Interior) {
        CommonFixedPoint out;
        out.lift = *body.normalize(X);
        out.point = ProjPoint(out.lift);
        out.interior = true;
        return out;
      }
      if (loc == Location::Boundary && !boundary) boundary = *body.normalize(X);
    }
  }
  if (!boundary) throw Error(ErrorCode::NoneFound, "no common fixed point in the closure");
  CommonFixedPoint out;
  out.lift = *boundary;
  out.point = ProjPoint(out.lift);
  std::vector<Mat> duals;
  for (const auto& M : mats) duals.push_back(M.inverse().transpose());
  const Mat annihilator = complement_basis(out.lift);
  for (const auto& S : shared_eigenspaces(duals)) {
    const Mat I = intersect_subspaces(S, annihilator, 1e-7);
    if (I.cols() == 0) continue;
    for (const auto& eta : subspace_candidates(I, body.patch())) {
      if (supports(body, eta)) {
        out.covector = eta.normalized();
        return out;
      }
    }
  }
  return out;
}

SmallDisplacement small_displacement_point(const ConvexBody& body, const std::vector<ProjMap>& maps, double eps,
                                           int budget) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  for (const auto& A : maps)
    if (classify(body, A).kind == IsometryKind::Hyperbolic)
      throw Error(ErrorCode::HyperbolicPresent, "a hyperbolic map is present");
  std::vector<Mat> mats;
  for (const auto& A : maps) mats.push_back(A.matrix());
  auto worst = [&](const Vec& X) {
    double d = 0.0;
    for (const auto& M : mats) d = std::max(d, displacement_at(body, M, X));
    return d;
  };
  const CommonFixedPoint cfp = common_fixed_point(body, maps);
  SmallDisplacement out;
  if (cfp.interior) {
    out.point = cfp.lift;
    out.max_displacement = worst(cfp.lift);
    if (out.max_displacement < eps) return out;
  }
  const Vec& W = body.witness();
  for (int k = 0; k <= budget; ++k) {
    const Vec X = cfp.lift + std::ldexp(1.0, -k) * (W - cfp.lift);
    if (locate(body, X, 0.0) != Location::Interior) break;
    out.point = X;
    out.steps = k;
    out.max_displacement = worst(X);
    if (out.max_displacement < eps) return out;
  }
  throw Error(ErrorCode::BudgetExhausted, "no point with small displacement found along the ray");
}

std::vector<ThinPoint> thin_part_sample(const ConvexBody& body, const GroupBall& ball, double eps,
                                        const std::vector<Vec>& grid) {
  require_isometries(body, ball.generators);
  const ProjMap id = ProjMap::identity(body.size());
  std::vector<size_t> nontrivial;
  std::vector<std::string> kinds;
  for (size_t i = 0; i < ball.elements.size(); ++i) {
    if (same_map(ball.elements[i], id)) continue;
    nontrivial.push_back(i);
    std::string k = "unknown";
    try {
      k = std::string(to_string(classify(body, ball.elements[i]).kind));
      std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
    } catch (const Error&) {
    }
    kinds.push_back(k);
  }
  std::vector<ThinPoint> out(grid.size());
  const int shards = static_cast<int>(std::min<size_t>(16, std::max<size_t>(1, grid.size())));
  run_shards(shards, 0, [&](int s, std::uint64_t) {
    for (size_t g = static_cast<size_t>(s); g < grid.size(); g += static_cast<size_t>(shards)) {
      ThinPoint tp;
      tp.X = *body.normalize(grid[g]);
      double best = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < nontrivial.size(); ++k) {
        const double d = displacement_at(body, ball.elements[nontrivial[k]].matrix(), tp.X);
        if (d < best) {
          best = d;
          tp.witness_kind = kinds[k];
        }
      }
      tp.inj = 0.5 * best;
      tp.thin = tp.inj < eps;
      out[g] = tp;
    }
  });
  return out;
}

std::string thin_part_csv(const std::vector<ThinPoint>& pts) {
  std::ostringstream os;
  const Eigen::Index N = pts.empty() ? 0 : pts.front().X.size();
  for (Eigen::Index i = 0; i < N; ++i) os << 'x' << i << ',';
  os << "inj_estimate,thin_flag,witness_kind\n" << std::setprecision(17);
  for (const auto& p : pts) {
    for (Eigen::Index i = 0; i < N; ++i) os << p.X(i) << ',';
    os << p.inj << ',' << (p.thin ? 1 : 0) << ',' << p.witness_kind << '\n';
  }
  return os.str();
}

std::vector<Vec> interior_grid(const ConvexBody& body, int per_axis) {
  if (per_axis < 1) throw Error(ErrorCode::InvalidInput, "grid needs at least one point per axis");
  const int n = body.dim();
  Rng rng(47);
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity()), hi = -lo;
  for (int i = 0; i < 400; ++i) {
    const Vec y = body.to_chart(sample_boundary(body, rng));
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (;;) {
    Vec y(n);
    for (int j = 0; j < n; ++j) y(j) = lo(j) + (hi(j) - lo(j)) * (idx[static_cast<size_t>(j)] + 0.5) / per_axis;
    const Vec X = body.from_chart(y);
    if (locate(body, X, body.tolerances().boundary_band) == Location::Interior) out.push_back(X);
    int j = 0;
    while (j < n && ++idx[static_cast<size_t>(j)] == per_axis) idx[static_cast<size_t>(j++)] = 0;
    if (j == n) break;
  }
  return out;
}

}  // namespace hilbert
