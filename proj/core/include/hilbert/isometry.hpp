#pragma once

#include "hilbert/domain.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace hilbert {

enum class IsometryKind { Elliptic, Parabolic, Hyperbolic };
std::string_view to_string(IsometryKind kind);

struct FixedSet {
  double eigenvalue = 0.0;
  std::vector<ProjPoint> points;  // in the closure of the body
};

struct IsometryCertificate {
  std::vector<std::complex<double>> eigenvalues;  // cluster values, with multiplicity
  std::vector<double> moduli;
  std::optional<Vec> interior_fixed_point;  // patch-normalized
  double fixed_residual = 0.0;              // d(x, Ax) at the fixed point
  double unit_band = 0.0;
  Spectrum spectrum;
};

struct IsometryClassification {
  IsometryKind kind = IsometryKind::Elliptic;
  double translation_length = 0.0;
  std::vector<FixedSet> fixed_sets;
  std::optional<Chord> axis;
  IsometryCertificate certificate;
};

struct IsometryOptions {
  double unit_band = 1e-7;
  double fixed_tol = 1e-9;
  int preserve_samples = 200;
  std::uint64_t seed = 3;
};

// A with sign chosen so the cone over the body maps to itself (φ(A·witness) > 0).
Mat cone_normalized(const ConvexBody& body, const ProjMap& A);

bool preserves(const ConvexBody& body, const ProjMap& A, int samples = 200, std::uint64_t seed = 3);

IsometryClassification classify(const ConvexBody& body, const ProjMap& A, const IsometryOptions& opts = {});

struct TranslationEstimate {
  double estimate = 0.0;
  Vec argmin;                   // patch-normalized
  std::vector<long> checkpoints;  // evaluation counts
  std::vector<double> history;    // best value after each checkpoint, non-increasing
  long evaluations = 0;
};

// inf d(x, Ax): random starts followed by pattern search; the evaluation sequence does not depend
// on the budget, so larger budgets never give larger estimates.
TranslationEstimate empirical_translation_length(const ConvexBody& body, const ProjMap& A, long budget,
                                                 std::uint64_t seed);

// d(x, Ax) for a patch-normalized interior x.
double displacement_at(const ConvexBody& body, const Mat& A, const Vec& X);

struct JnfRow {
  std::complex<double> value;
  int multiplicity = 0;
  int index = 0;  // largest block
  std::vector<int> blocks;
};

struct JnfReport {
  std::vector<JnfRow> rows;
  int max_index = 0;
  int index_one = 0;  // i(1), after passing to −A when needed
  bool negated = false;
  bool one_attains_max = false;
  bool odd = false;
  bool pass = false;
  // dimension 2 and 3: the block structure of a parabolic in O(n,1)
  std::optional<bool> o_n1_conditions;
  bool consistent = true;
};

JnfReport parabolic_jnf_check(const ProjMap& A, double unit_band = 1e-7);

struct Pencil {
  Mat center;  // N × (N−2), orthonormal
  ProjHyperplane H_plus, H_minus;  // supporting at p_plus, p_minus
  ProjPoint p_plus, p_minus;
  std::vector<ProjHyperplane> fibers;  // H_plus − c H_minus
  std::vector<double> params;          // c > 0
  double shift = 0.0;                  // log c(Ax) − log c(x)
  bool no_fixed_fiber = false;
};

Pencil invariant_pencil(const ConvexBody& body, const ProjMap& A, int fibers = 16);
// log(H_plus(x) / H_minus(x)) for interior x.
double pencil_coordinate(const Pencil& pencil, const Vec& X);
// The axis point on the fiber through x, patch-normalized.
Vec pencil_projection(const ConvexBody& body, const Pencil& pencil, const Vec& X);

nlohmann::json to_json(const IsometryClassification& c);
nlohmann::json to_json(const JnfReport& r);

}  // namespace hilbert
