#include "hilbert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace hilbert {

Mat null_space(const Mat& M, double rel_tol) {
  const Eigen::Index cols = M.cols();
  if (M.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * scale) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

CMat complex_null_space(const CMat& M, double abs_tol) {
  const Eigen::Index cols = M.cols();
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullV);
  const Vec s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > abs_tol) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Mat orth(const Mat& M, double rel_tol) {
  if (M.cols() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * scale) ++rank;
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Mat& M, double abs_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  return static_cast<int>((s.array() > abs_tol).count());
}

int complex_numerical_rank(const CMat& M, double abs_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(M);
  const Vec s = svd.singularValues();
  return static_cast<int>((s.array() > abs_tol).count());
}

Mat complement_basis(const Vec& v) {
  const Eigen::Index n = v.size();
  const Vec u = v.normalized();
  Eigen::Index skip = 0;
  u.cwiseAbs().maxCoeff(&skip);
  Mat out(n, n - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == skip) continue;
    Vec e = Vec::Unit(n, i);
    e -= u.dot(e) * u;
    for (Eigen::Index j = 0; j < col; ++j) e -= out.col(j).dot(e) * out.col(j);
    out.col(col++) = e.normalized();
  }
  return out;
}

Mat intersect_subspaces(const Mat& A, const Mat& B, double tol) {
  if (A.cols() == 0 || B.cols() == 0) return Mat(A.rows(), 0);
  // x = A a = B b  <=>  [A, -B] (a; b) = 0
  Mat M(A.rows(), A.cols() + B.cols());
  M << A, -B;
  const Mat K = null_space(M, tol);
  if (K.cols() == 0) return Mat(A.rows(), 0);
  return orth(A * K.topRows(A.cols()), tol);
}

double distance_to_subspace(const Vec& x, const Mat& B) {
  const Vec u = x.normalized();
  if (B.cols() == 0) return 1.0;
  return (u - B * (B.transpose() * u)).norm();
}

Mat matrix_power(const Mat& A, int k) {
  Mat out = Mat::Identity(A.rows(), A.cols());
  for (int i = 0; i < k; ++i) out = out * A;
  return out;
}

CMat matrix_power(const CMat& A, int k) {
  CMat out = CMat::Identity(A.rows(), A.cols());
  for (int i = 0; i < k; ++i) out = out * A;
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

Vec Rng::normal_vector(int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal();
  return v;
}

Vec Rng::unit_vector(int dim) {
  for (;;) {
    Vec v = normal_vector(dim);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Vec Rng::unit_vector_in(const Mat& B) {
  return B * unit_vector(static_cast<int>(B.cols()));
}

void run_shards(int shards, std::uint64_t seed,
                const std::function<void(int, std::uint64_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::min<int>(shards, static_cast<int>(hw));
  if (workers <= 1) {
    for (int s = 0; s < shards; ++s) fn(s, derive_seed(seed, s));
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int s = w; s < shards; s += workers) fn(s, derive_seed(seed, s));
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
}

double unit_sphere_area(int dim) { return dim * unit_ball_volume(dim); }

}  // namespace hilbert
