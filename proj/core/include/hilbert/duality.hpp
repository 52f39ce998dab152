#pragma once

#include "hilbert/domain.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace hilbert {

// Body in the dual space; provenance holds {"dual_of": primal scene}.
// Ellipsoids and polytopes are exact; other bodies get a polytope_h outer approximation
// cut out by sampled boundary points.
ConvexBody dual_domain(const ConvexBody& body, int samples = 400, std::uint64_t seed = 13);

struct CharEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

// Monte Carlo for f(x) = ∫_{C*} e^{−ψ(x)} dψ with a fixed set of slice samples,
// so estimates at different x are paired (common random numbers).
// f(x) = (N−1)!/|w| ∫_{Σ_w} σ(x)^{−N} dσ over the slice Σ_w = {ψ ∈ C* : ψ(w) = 1}.
class CharacteristicFunction {
 public:
  CharacteristicFunction(const ConvexBody& body, long samples, std::uint64_t seed, int shards = 8);
  CharEstimate operator()(const Vec& x) const;
  // Mean of f over the samples, without error bookkeeping.
  double value(const Vec& x) const;
  int size() const { return N_; }

 private:
  int N_ = 0;
  Mat sigma_;      // N × samples, slice points
  Vec weight_;     // radial weights ρ^{N−1}
  double scale_ = 0.0;
};

CharEstimate characteristic_function(const ConvexBody& body, const Vec& x, long samples, std::uint64_t seed);
// Orthant/simplex cones and ellipsoid (Lorentz) cones.
std::optional<double> characteristic_closed_form(const ConvexBody& body, const Vec& x);

// s·x with f(s·x) = t, using f(sx) = s^{−N} f(x).
Vec vinberg_point(const ConvexBody& body, const Vec& x, double t, long samples = 100000, std::uint64_t seed = 1);

// {[X] ∈ Ω : H(X)^N f(X) < t} with H the patch covector unless given.
ConvexBody vinberg_shrink(const ConvexBody& body, double t, long samples = 4000, std::uint64_t seed = 1,
                          std::optional<Vec> H = {});
// Level of the shrink through the witness (g at the witness), a convenient nonempty choice of t.
double vinberg_level(const ConvexBody& body, long samples = 4000, std::uint64_t seed = 1, std::optional<Vec> H = {});

// N × centroid of the slice {ψ ∈ C* : ψ(x) = 1}, i.e. the centroid of {ψ(x) = N}.
Vec duality_map(const ConvexBody& body, const Vec& x, long samples = 20000, std::uint64_t seed = 1);
Vec duality_map(const ConvexBody& body, const ConvexBody& dual, const Vec& x, long samples, std::uint64_t seed);

}  // namespace hilbert
