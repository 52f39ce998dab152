#pragma once

#include "hilbert/domain.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hilbert {

double hilbert_distance(const ConvexBody& body, const ProjPoint& a, const ProjPoint& b);
// Patch-normalized lifts, assumed interior; symmetric bit for bit.
double hilbert_distance(const ConvexBody& body, const Vec& A, const Vec& B);

struct FinslerSample {
  Vec base;
  Vec direction;  // unit, patch direction
  double norm_value = 0.0;
};

// v: chart coordinates (size n) or a vector of V (size n+1).
double finsler_norm(const ConvexBody& body, const ProjPoint& a, const Vec& v);
FinslerSample finsler_sample(const ConvexBody& body, const ProjPoint& a, const Vec& v);

// Boundary sample of the metric ball; rows are patch-normalized lifts.
std::vector<Vec> metric_ball(const ConvexBody& body, const ProjPoint& center, double r, int samples,
                             std::uint64_t seed);
// Point t*D along the chord from the (interior, patch-normalized) center with d(center, point) = r.
Vec ball_point(const ConvexBody& body, const Vec& center, const Vec& D, double r);

std::string points_csv(const std::vector<Vec>& points);

struct VolumeOptions {
  int directions = 256;
  int shards = 16;
};

struct VolumeEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
  long rejected = 0;
};

using Region = std::function<bool(const Vec&)>;  // patch-normalized lift

// Busemann density: vol(unit Euclidean ball) / vol(unit Finsler ball), in chart coordinates.
double busemann_density(const ConvexBody& body, const Vec& X, int directions, Rng& rng);

// Monte Carlo over the chart box [lo, hi].
VolumeEstimate busemann_volume(const ConvexBody& body, const Region& region, const Vec& lo, const Vec& hi,
                               long samples, std::uint64_t seed, const VolumeOptions& opts = {});

// Chart-coordinate bounding box of a Hilbert ball, padded by margin (relative).
std::pair<Vec, Vec> hilbert_ball_box(const ConvexBody& body, const ProjPoint& center, double r,
                                     int samples = 4000, double margin = 0.02);

}  // namespace hilbert
