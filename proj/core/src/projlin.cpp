#include "hilbert/projlin.hpp"

#include "hilbert/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace hilbert {

namespace {

void require_finite_nonzero(const Vec& v, const char* what) {
  if (v.size() == 0 || !v.allFinite() || v.norm() == 0.0)
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be finite and nonzero");
}

Vec canonical_form(const Vec& v) {
  Vec u = v.normalized();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

}  // namespace

ProjPoint::ProjPoint(Vec coords, int lift_sign) : coords_(std::move(coords)), lift_sign_(lift_sign < 0 ? -1 : 1) {
  require_finite_nonzero(coords_, "point coordinates");
}

ProjPoint ProjPoint::from_affine(const Vec& x) {
  Vec X(x.size() + 1);
  X << x, 1.0;
  return ProjPoint(X);
}

Vec ProjPoint::canonical() const { return canonical_form(coords_); }

Vec ProjPoint::affine() const {
  const double w = coords_(coords_.size() - 1);
  if (std::abs(w) < 1e-300) throw Error(ErrorCode::DegenerateConfiguration, "point at infinity of the standard chart");
  return coords_.head(coords_.size() - 1) / w;
}

bool ProjPoint::approx_equal(const ProjPoint& other, double tol) const {
  if (other.size() != size()) return false;
  const Vec u = coords_.normalized();
  const Vec v = other.coords_.normalized();
  return std::min((u - v).norm(), (u + v).norm()) <= tol;
}

ProjHyperplane::ProjHyperplane(Vec covector) : covector_(std::move(covector)) {
  require_finite_nonzero(covector_, "covector");
}

Vec ProjHyperplane::canonical() const { return canonical_form(covector_); }

double ProjHyperplane::incidence(const ProjPoint& p) const {
  return std::abs(covector_.normalized().dot(p.coords().normalized()));
}

ProjMap::ProjMap(const Mat& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0 || !matrix.allFinite())
    throw Error(ErrorCode::InvalidInput, "map must be a finite square matrix");
  const double n = static_cast<double>(matrix.rows());
  const double det = matrix.determinant();
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0 || std::pow(std::abs(det), 1.0 / n) <= 1e-12 * scale)
    throw Error(ErrorCode::Singular, "matrix is singular");
  det_sign_ = det > 0 ? 1 : -1;
  matrix_ = matrix / std::pow(std::abs(det), 1.0 / n);
}

ProjMap ProjMap::identity(int size) { return ProjMap(Mat::Identity(size, size)); }

ProjPoint ProjMap::apply(const ProjPoint& p) const {
  return ProjPoint(matrix_ * p.coords(), p.lift_sign());
}

ProjHyperplane ProjMap::apply(const ProjHyperplane& H) const {
  return ProjHyperplane(matrix_.transpose().partialPivLu().solve(H.covector()));
}

ProjMap ProjMap::compose(const ProjMap& other) const { return ProjMap(matrix_ * other.matrix_); }

ProjMap ProjMap::inverse() const { return ProjMap(matrix_.inverse()); }

ProjMap ProjMap::negated() const { return ProjMap(-matrix_); }

double cross_ratio(const ProjPoint& x, const ProjPoint& a, const ProjPoint& b, const ProjPoint& y,
                   double tol) {
  const int N = x.size();
  if (a.size() != N || b.size() != N || y.size() != N)
    throw Error(ErrorCode::InvalidInput, "points of different dimensions");
  Mat P(N, 4);
  P.col(0) = x.coords().normalized();
  P.col(1) = a.coords().normalized();
  P.col(2) = b.coords().normalized();
  P.col(3) = y.coords().normalized();
  Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  if (s.size() >= 3 && s(2) > tol * s(0)) throw Error(ErrorCode::NonCollinear, "points do not lie on a line");
  const Mat U = svd.matrixU().leftCols(2);
  const Mat C = U.transpose() * P;  // 2 x 4 line coordinates
  auto det = [&](int i, int j) { return C(0, i) * C(1, j) - C(0, j) * C(1, i); };
  const double bx = std::abs(det(2, 0)), ay = std::abs(det(1, 3));
  const double by = std::abs(det(2, 3)), ax = std::abs(det(1, 0));
  if (by < tol || ax < tol) throw Error(ErrorCode::DegenerateConfiguration, "coincident points in cross-ratio denominator");
  return (bx * ay) / (by * ax);
}

// ---------------------------------------------------------------------------
// spectrum

namespace {

struct Group {
  std::vector<std::complex<double>> members;
  std::complex<double> mean() const {
    std::complex<double> s = 0.0;
    for (auto z : members) s += z;
    return s / static_cast<double>(members.size());
  }
  double spread() const {
    const auto m = mean();
    double s = 0.0;
    for (auto z : members) s = std::max(s, std::abs(z - m));
    return s;
  }
};

double cluster_scale(std::complex<double> z) { return std::max(1.0, std::abs(z)); }

std::vector<int> blocks_from_ranks(const Mat& A, std::complex<double> lambda, int mult, double spread,
                                   const SpectrumOptions& opts, bool& ok) {
  const int N = static_cast<int>(A.rows());
  const double anorm = std::max(1.0, A.norm());
  std::vector<int> ranks{N};
  const bool real = lambda.imag() == 0.0;
  Mat Mr;
  CMat Mc;
  if (real) Mr = A - lambda.real() * Mat::Identity(N, N);
  else Mc = A.cast<std::complex<double>>() - lambda * CMat::Identity(N, N);
  Mat Pr = Mat::Identity(N, N);
  CMat Pc = CMat::Identity(N, N);
  for (int k = 1; k <= mult + 1; ++k) {
    const double tol = std::max(opts.rank_rel_tol, 100.0 * std::pow(spread, k)) * std::pow(anorm, k);
    int r;
    if (real) {
      Pr = Pr * Mr;
      r = numerical_rank(Pr, tol);
    } else {
      Pc = Pc * Mc;
      r = complex_numerical_rank(Pc, tol);
    }
    ranks.push_back(r);
  }
  // blocks of size >= k: ranks[k-1] - ranks[k]
  std::vector<int> at_least(mult + 3, 0);
  for (int k = 1; k <= mult + 1; ++k) at_least[k] = std::max(0, ranks[k - 1] - ranks[k]);
  std::vector<int> sizes;
  for (int k = mult + 1; k >= 1; --k) {
    const int exact = std::max(0, at_least[k] - at_least[k + 1]);
    for (int i = 0; i < exact; ++i) sizes.push_back(k);
  }
  int total = std::accumulate(sizes.begin(), sizes.end(), 0);
  ok = total == mult;
  while (total > mult && !sizes.empty()) {
    total -= sizes.back();
    sizes.pop_back();
  }
  while (total < mult) {
    sizes.push_back(1);
    ++total;
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

}  // namespace

Spectrum spectrum(const Mat& A, const SpectrumOptions& opts) {
  if (A.rows() != A.cols() || !A.allFinite()) throw Error(ErrorCode::InvalidInput, "spectrum needs a finite square matrix");
  const int N = static_cast<int>(A.rows());
  Eigen::EigenSolver<Mat> es(A, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigenvalue iteration did not converge");
  const CVec ev = es.eigenvalues();

  std::vector<Group> groups;
  for (int i = 0; i < N; ++i) {
    const auto z = ev(i);
    bool placed = false;
    for (auto& g : groups) {
      for (auto w : g.members) {
        if (std::abs(z - w) <= opts.cluster_rel_tol * std::max({1.0, std::abs(z), std::abs(w)})) {
          g.members.push_back(z);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) groups.push_back(Group{{z}});
  }
  // transitive closure of the first pass
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < groups.size() && !changed; ++i)
      for (size_t j = i + 1; j < groups.size() && !changed; ++j)
        for (auto z : groups[i].members)
          for (auto w : groups[j].members)
            if (!changed && std::abs(z - w) <= opts.cluster_rel_tol * std::max({1.0, std::abs(z), std::abs(w)})) {
              groups[i].members.insert(groups[i].members.end(), groups[j].members.begin(), groups[j].members.end());
              groups.erase(groups.begin() + static_cast<long>(j));
              changed = true;
            }
  }
  // defective merge: a block of size m splits its eigenvalue by about eps^{1/m}, so a pair
  // of a split triple may fail the test while the whole triple passes; search subsets.
  for (;;) {
    const size_t G = groups.size();
    if (G < 2) break;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    const bool exhaustive = G <= 14;
    auto consider = [&](std::uint64_t mask) {
      Group g;
      for (size_t i = 0; i < G; ++i)
        if (mask >> i & 1U) g.members.insert(g.members.end(), groups[i].members.begin(), groups[i].members.end());
      const double s = g.spread();
      const int m = static_cast<int>(g.members.size());
      if (std::pow(s / cluster_scale(g.mean()), m) <= opts.defect_tol && s < best) {
        best = s;
        best_mask = mask;
      }
    };
    if (exhaustive) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << G); ++mask)
        if (std::popcount(mask) >= 2) consider(mask);
    } else {
      for (size_t i = 0; i < G; ++i)
        for (size_t j = i + 1; j < G; ++j) consider((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
    }
    if (!std::isfinite(best)) break;
    std::vector<Group> next;
    Group merged;
    for (size_t i = 0; i < G; ++i) {
      if (best_mask >> i & 1U)
        merged.members.insert(merged.members.end(), groups[i].members.begin(), groups[i].members.end());
      else
        next.push_back(groups[i]);
    }
    next.insert(next.begin(), merged);
    groups = std::move(next);
  }

  Spectrum out;
  for (const auto& g : groups) {
    EigenCluster c;
    c.value = g.mean();
    c.multiplicity = static_cast<int>(g.members.size());
    c.spread = g.spread();
    if (std::abs(c.value.imag()) <= opts.cluster_rel_tol * cluster_scale(c.value)) c.value = {c.value.real(), 0.0};
    bool ok = true;
    c.block_sizes = blocks_from_ranks(A, c.value, c.multiplicity, c.spread, opts, ok);
    c.max_block = c.block_sizes.front();
    out.consistent = out.consistent && ok;
    out.eigenvalues.push_back(c);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const EigenCluster& a, const EigenCluster& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, ma)) return ma > mb;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });
  for (const auto& c : out.eigenvalues) out.spectral_radius = std::max(out.spectral_radius, std::abs(c.value));
  int k = 0;
  for (const auto& c : out.eigenvalues)
    if (std::abs(c.value) >= out.spectral_radius * (1.0 - opts.cluster_rel_tol)) k = std::max(k, c.max_block);
  out.power = {out.spectral_radius, k};
  return out;
}

Spectrum spectrum(const ProjMap& A, const SpectrumOptions& opts) { return spectrum(A.matrix(), opts); }

namespace {

// f(A) for the real factor of the cluster; returns the degree of f
Mat cluster_factor(const Mat& A, const EigenCluster& c, int& degree) {
  const int N = static_cast<int>(A.rows());
  if (c.value.imag() == 0.0) {
    degree = 1;
    return A - c.value.real() * Mat::Identity(N, N);
  }
  degree = 2;
  return A * A - 2.0 * c.value.real() * A + std::norm(c.value) * Mat::Identity(N, N);
}

// Right singular vectors of M for its d smallest singular values.
Mat smallest_right_singular(const Mat& M, int d) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(d);
}

}  // namespace

Mat generalized_eigenspace(const Mat& A, const EigenCluster& c) {
  int degree = 1;
  const Mat f = cluster_factor(A, c, degree);
  return smallest_right_singular(matrix_power(f, c.multiplicity), degree * c.multiplicity);
}

AttractingSubspaces attracting_subspaces(const Mat& A, const SpectrumOptions& opts) {
  const Spectrum sp = spectrum(A, opts);
  const int N = static_cast<int>(A.rows());
  const double r = sp.spectral_radius;
  const int k = sp.power.second;
  std::vector<Mat> Es, Ks;
  for (const auto& c : sp.eigenvalues) {
    if (c.value.imag() < 0.0) continue;  // the conjugate partner carries the real subspace
    int degree = 1;
    const Mat f = cluster_factor(A, c, degree);
    const Mat G = generalized_eigenspace(A, c);
    const bool top = std::abs(c.value) >= r * (1.0 - opts.cluster_rel_tol) && c.max_block == k;
    if (!top) {
      Ks.push_back(G);
      continue;
    }
    const int nmax = static_cast<int>(std::count(c.block_sizes.begin(), c.block_sizes.end(), k));
    const int e = degree * nmax;
    const Mat M = matrix_power(f, k - 1) * G;
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Es.push_back(svd.matrixU().leftCols(e));
    Ks.push_back(G * svd.matrixV().rightCols(G.cols() - e));
  }
  auto stack = [N](const std::vector<Mat>& parts) {
    int cols = 0;
    for (const auto& p : parts) cols += static_cast<int>(p.cols());
    Mat S(N, cols);
    int at = 0;
    for (const auto& p : parts) {
      S.middleCols(at, p.cols()) = p;
      at += static_cast<int>(p.cols());
    }
    return S;
  };
  AttractingSubspaces out;
  out.E = orth(stack(Es), 1e-9);
  out.K = orth(stack(Ks), 1e-9);
  out.method = "generalized-eigenspace";
  if (out.E.cols() + out.K.cols() != N) out.method += " (dimension mismatch)";
  return out;
}

AttractingSubspaces attracting_subspaces(const ProjMap& A, const SpectrumOptions& opts) {
  return attracting_subspaces(A.matrix(), opts);
}

ProjMap dual_action(const ProjMap& A) { return ProjMap(A.matrix().inverse().transpose()); }

}  // namespace hilbert
