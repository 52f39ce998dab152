#pragma once

#include "hilbert/linalg.hpp"

#include <vector>

namespace hilbert {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
};

// Small dense linear program solved by the two-phase tableau simplex with Bland's rule.
// Variables are nonnegative unless marked free.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars);

  void set_free(int var);
  void add_le(const Vec& a, double b);
  void add_ge(const Vec& a, double b) { add_le(-a, -b); }
  void add_eq(const Vec& a, double b);

  LpResult maximize(const Vec& c) const;
  LpResult minimize(const Vec& c) const;

  int num_vars() const { return n_; }

 private:
  struct Row {
    Vec a;
    double b;
    bool equality;
  };
  int n_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace hilbert
