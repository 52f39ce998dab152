#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace hilbert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Orthonormal basis (columns) of ker M; singular values below rel_tol * max(1, sigma_max) count as zero.
Mat null_space(const Mat& M, double rel_tol = 1e-10);
CMat complex_null_space(const CMat& M, double abs_tol);

// Orthonormal basis (columns) of the column span of M.
Mat orth(const Mat& M, double rel_tol = 1e-10);

int numerical_rank(const Mat& M, double abs_tol);
int complex_numerical_rank(const CMat& M, double abs_tol);

// Orthonormal basis of the orthogonal complement of v. Uses standard basis vectors
// whenever v is a multiple of one.
Mat complement_basis(const Vec& v);

// Orthonormal basis of span(A) ∩ span(B) for orthonormal-column inputs.
Mat intersect_subspaces(const Mat& A, const Mat& B, double tol = 1e-9);

// Distance from the unit vector x/|x| to the unit sphere of span(B), B orthonormal.
double distance_to_subspace(const Vec& x, const Mat& B);

Mat matrix_power(const Mat& A, int k);
CMat matrix_power(const CMat& A, int k);

// splitmix64 stream derivation: shard seeds are splitmix64(seed ^ golden * (stream + 1)).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  double uniform() { return unif_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(engine_); }
  double normal() { return norm_(engine_); }
  std::uint64_t bits() { return engine_(); }
  int index(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  Vec normal_vector(int dim);
  Vec unit_vector(int dim);
  // Uniform unit vector inside the span of the orthonormal columns of B.
  Vec unit_vector_in(const Mat& B);

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

// Runs fn(shard, seed_for_shard) for shard = 0..shards-1 on worker threads.
// Results must be combined by the caller in shard order to stay deterministic.
void run_shards(int shards, std::uint64_t seed,
                const std::function<void(int, std::uint64_t)>& fn);

double unit_ball_volume(int dim);
double unit_sphere_area(int dim);  // area of S^{dim-1} in R^dim

}  // namespace hilbert
