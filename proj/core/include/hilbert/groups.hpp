#pragma once

#include "hilbert/domain.hpp"
#include "hilbert/isometry.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hilbert {

struct GroupBall {
  std::vector<ProjMap> generators;  // with inverses
  std::vector<ProjMap> elements;    // elements[0] is the identity
  std::vector<int> lengths;         // word length of each element
  int L = 0;
};

struct BallOptions {
  long max_elements = 100000;
  double dedup_tol = 1e-9;
};

// Sign-canonical matrix of a det-normalized map (first significant entry positive).
Mat canonical_matrix(const ProjMap& A);
bool same_map(const ProjMap& A, const ProjMap& B, double tol = 1e-9);

GroupBall enumerate_ball(const std::vector<ProjMap>& generators, int L, const BallOptions& opts = {});

// ½ min d(x, γx) over nontrivial elements; +infinity for the trivial group.
double injectivity_radius_estimate(const ConvexBody& body, const GroupBall& ball, const Vec& x);

struct ShortSubgroup {
  GroupBall ball;
  std::vector<ProjMap> short_elements;
  std::vector<IsometryKind> kinds;  // of the nontrivial elements of ball
  bool all_non_hyperbolic = true;
};

ShortSubgroup short_subgroup(const ConvexBody& body, const GroupBall& ball, const Vec& x, double mu = 0.1);

struct CommonFixedPoint {
  ProjPoint point;
  Vec lift;  // patch-normalized
  bool interior = false;
  std::optional<Vec> covector;  // shared invariant supporting covector at a boundary point
};

CommonFixedPoint common_fixed_point(const ConvexBody& body, const std::vector<ProjMap>& maps);

struct SmallDisplacement {
  Vec point;  // patch-normalized
  double max_displacement = 0.0;
  int steps = 0;
};

SmallDisplacement small_displacement_point(const ConvexBody& body, const std::vector<ProjMap>& maps, double eps,
                                           int budget = 60);

struct ThinPoint {
  Vec X;
  double inj = std::numeric_limits<double>::infinity();
  bool thin = false;
  std::string witness_kind = "none";
};

std::vector<ThinPoint> thin_part_sample(const ConvexBody& body, const GroupBall& ball, double eps,
                                        const std::vector<Vec>& grid);
std::string thin_part_csv(const std::vector<ThinPoint>& pts);

// Interior points of a regular chart grid (per_axis points along each chart axis).
std::vector<Vec> interior_grid(const ConvexBody& body, int per_axis);

}  // namespace hilbert
