#pragma once

#include "hilbert/linalg.hpp"

#include <complex>
#include <string>
#include <vector>

namespace hilbert {

// A point of P^n (or of its double cover S^n through lift_sign).
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(Vec coords, int lift_sign = 1);

  // [x : 1]
  static ProjPoint from_affine(const Vec& x);

  const Vec& coords() const { return coords_; }
  int lift_sign() const { return lift_sign_; }
  Vec lift() const { return lift_sign_ * coords_; }
  int size() const { return static_cast<int>(coords_.size()); }
  int dim() const { return size() - 1; }

  // Unit norm, first nonzero coordinate positive.
  Vec canonical() const;
  // Affine coordinates in the standard chart x_last = 1.
  Vec affine() const;

  bool approx_equal(const ProjPoint& other, double tol = 1e-12) const;

 private:
  Vec coords_;
  int lift_sign_ = 1;
};

class ProjHyperplane {
 public:
  ProjHyperplane() = default;
  explicit ProjHyperplane(Vec covector);

  const Vec& covector() const { return covector_; }
  Vec canonical() const;
  double incidence(const ProjPoint& p) const;  // |<H, p>| after normalizing both

 private:
  Vec covector_;
};

class ProjMap {
 public:
  ProjMap() = default;
  // Normalizes to |det| = 1; throws Singular for a (numerically) singular matrix.
  explicit ProjMap(const Mat& matrix);

  static ProjMap identity(int size);

  const Mat& matrix() const { return matrix_; }
  int det_sign() const { return det_sign_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  ProjPoint apply(const ProjPoint& p) const;
  Vec apply(const Vec& X) const { return matrix_ * X; }
  ProjHyperplane apply(const ProjHyperplane& H) const;

  ProjMap compose(const ProjMap& other) const;  // this ∘ other
  ProjMap inverse() const;
  ProjMap negated() const;

 private:
  Mat matrix_;
  int det_sign_ = 1;
};

inline ProjMap operator*(const ProjMap& a, const ProjMap& b) { return a.compose(b); }

// (|b−x|·|a−y|)/(|b−y|·|a−x|) for collinear points ordered x, a, b, y.
double cross_ratio(const ProjPoint& x, const ProjPoint& a, const ProjPoint& b, const ProjPoint& y,
                   double tol = 1e-9);

struct SpectrumOptions {
  double cluster_rel_tol = 1e-7;
  // clusters whose spread s satisfies s^m <= defect_tol * scale^m merge into one
  double defect_tol = 1e-12;
  double rank_rel_tol = 1e-9;
};

struct EigenCluster {
  std::complex<double> value;
  int multiplicity = 0;
  int max_block = 0;
  std::vector<int> block_sizes;  // non-increasing
  double spread = 0.0;
};

struct Spectrum {
  std::vector<EigenCluster> eigenvalues;  // by modulus, then argument, descending
  double spectral_radius = 0.0;
  std::pair<double, int> power{0.0, 0};
  bool consistent = true;  // rank-derived block sizes match multiplicities
};

Spectrum spectrum(const Mat& A, const SpectrumOptions& opts = {});
Spectrum spectrum(const ProjMap& A, const SpectrumOptions& opts = {});

struct AttractingSubspaces {
  Mat E;  // orthonormal columns
  Mat K;
  std::string method;
};

AttractingSubspaces attracting_subspaces(const ProjMap& A, const SpectrumOptions& opts = {});
AttractingSubspaces attracting_subspaces(const Mat& A, const SpectrumOptions& opts = {});

// Generalized eigenspace ker f(A)^m for the cluster (real basis; complex clusters use the
// real quadratic factor of the conjugate pair).
Mat generalized_eigenspace(const Mat& A, const EigenCluster& c);

// transpose(A^{-1}), det-normalized
ProjMap dual_action(const ProjMap& A);

}  // namespace hilbert
