#pragma once

#include "hilbert/domain.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace hilbert {

struct StraightTriangle {
  ProjPoint a, b, c;
};

struct ThinnessOptions {
  int samples = 200;     // per side
  double nudge = 1e-6;   // inward move of closure vertices toward the centroid
};

struct ThinnessResult {
  double delta = 0.0;
  Vec argmax;           // side point realizing delta, patch-normalized
  bool nudged = false;  // some vertex was on the boundary
  int samples = 0;
};

// Patch-normalized vertices after the inward nudge; throws DegenerateTriangle.
std::array<Vec, 3> triangle_vertices(const ConvexBody& body, const StraightTriangle& T, double nudge, bool* nudged = nullptr);

ThinnessResult triangle_thinness(const ConvexBody& body, const StraightTriangle& T, const ThinnessOptions& opts = {});

struct Incenter {
  Vec point;  // patch-normalized
  double inradius = 0.0;
};

Incenter incenter(const ConvexBody& body, const StraightTriangle& T, int samples = 200, std::uint64_t seed = 1,
                  const ThinnessOptions& opts = {});

bool pet_check(const ConvexBody& body, const StraightTriangle& T, int samples = 50, double tol = 1e-8);

struct FatTriangle {
  StraightTriangle triangle;
  double delta = 0.0;
  int evaluated = 0;
};

struct FatSearchResult {
  std::optional<FatTriangle> witness;
  double best_delta = 0.0;  // best measured thinness over the search
  int evaluated = 0;
};

FatSearchResult fat_triangle_search(const ConvexBody& body, double delta_target, int budget = 200,
                                    std::uint64_t seed = 1);

}  // namespace hilbert
