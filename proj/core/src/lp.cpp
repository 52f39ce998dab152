#include "hilbert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hilbert {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  Tableau(Mat A, Vec b) : m_(A.rows()), ncols_(A.cols()) {
    T_ = Mat::Zero(m_ + 1, ncols_ + 1);
    T_.topLeftCorner(m_, ncols_) = A;
    T_.topRightCorner(m_, 1) = b;
    basis_.assign(m_, -1);
  }

  Mat& data() { return T_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    T_.row(r) /= T_(r, c);
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    basis_[r] = c;
  }

  // Loads objective row for maximizing c over the columns allowed.
  void load_objective(const Vec& c) {
    T_.row(m_).setZero();
    T_.row(m_).head(ncols_) = -c.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const int bi = basis_[i];
      if (bi >= 0 && c(bi) != 0.0) T_.row(m_) += c(bi) * T_.row(i);
    }
  }

  // Returns false if unbounded.
  bool run(const std::vector<bool>& allowed) {
    const double scale = std::max(1.0, T_.cwiseAbs().maxCoeff());
    const double eps = kPivotTol * scale;
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (Eigen::Index j = 0; j < ncols_; ++j) {
        if (allowed[j] && T_(m_, j) < -eps) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a > eps) {
          const double ratio = T_(i, ncols_) / a;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = static_cast<int>(i);
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  double objective() const { return T_(m_, ncols_); }

  Vec solution() const {
    Vec x = Vec::Zero(ncols_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] >= 0) x(basis_[i]) = T_(i, ncols_);
    return x;
  }

 private:
  Eigen::Index m_, ncols_;
  Mat T_;
  std::vector<int> basis_;
};

}  // namespace

LinearProgram::LinearProgram(int num_vars) : n_(num_vars), free_(num_vars, false) {}

void LinearProgram::set_free(int var) { free_.at(var) = true; }

void LinearProgram::add_le(const Vec& a, double b) { rows_.push_back({a, b, false}); }

void LinearProgram::add_eq(const Vec& a, double b) { rows_.push_back({a, b, true}); }

LpResult LinearProgram::minimize(const Vec& c) const {
  LpResult r = maximize(-c);
  r.value = -r.value;
  return r;
}

LpResult LinearProgram::maximize(const Vec& c) const {
  // column layout: split variables, then slacks, then artificials
  std::vector<int> pos(n_), neg(n_, -1);
  int col = 0;
  for (int j = 0; j < n_; ++j) {
    pos[j] = col++;
    if (free_[j]) neg[j] = col++;
  }
  const int nstruct = col;
  int nslack = 0;
  for (const auto& r : rows_)
    if (!r.equality) ++nslack;
  const int m = static_cast<int>(rows_.size());
  const int nart = m;
  const int ncols = nstruct + nslack + nart;

  Mat A = Mat::Zero(m, ncols);
  Vec b(m);
  int slack = nstruct;
  for (int i = 0; i < m; ++i) {
    const Row& row = rows_[i];
    for (int j = 0; j < n_; ++j) {
      A(i, pos[j]) = row.a(j);
      if (neg[j] >= 0) A(i, neg[j]) = -row.a(j);
    }
    if (!row.equality) A(i, slack++) = 1.0;
    b(i) = row.b;
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
    }
    A(i, nstruct + nslack + i) = 1.0;
  }

  Tableau tab(A, b);
  for (int i = 0; i < m; ++i) tab.basis()[i] = nstruct + nslack + i;

  // phase 1
  Vec c1 = Vec::Zero(ncols);
  c1.tail(nart).setConstant(-1.0);
  tab.load_objective(c1);
  std::vector<bool> all(ncols, true);
  tab.run(all);
  const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
  LpResult result;
  if (tab.objective() < -1e-9 * bscale) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // drive artificials out
  Mat& T = tab.data();
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] < nstruct + nslack) continue;
    for (int j = 0; j < nstruct + nslack; ++j) {
      if (std::abs(T(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // phase 2
  Vec c2 = Vec::Zero(ncols);
  for (int j = 0; j < n_; ++j) {
    c2(pos[j]) = c(j);
    if (neg[j] >= 0) c2(neg[j]) = -c(j);
  }
  tab.load_objective(c2);
  std::vector<bool> allowed(ncols, true);
  for (int j = nstruct + nslack; j < ncols; ++j) allowed[j] = false;
  if (!tab.run(allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  const Vec xs = tab.solution();
  result.x = Vec(n_);
  for (int j = 0; j < n_; ++j) result.x(j) = xs(pos[j]) - (neg[j] >= 0 ? xs(neg[j]) : 0.0);
  result.value = c.dot(result.x);
  result.status = LpStatus::Optimal;
  return result;
}

}  // namespace hilbert
