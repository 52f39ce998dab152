#pragma once

#include "hilbert/error.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/projlin.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hilbert {

enum class BodyKind { Ellipsoid, PolytopeH, PolytopeV, Simplex, ConeJoin, PosCone, OrbitHull, Oracle };
std::string_view to_string(BodyKind kind);

enum class Location { Interior, Boundary, Exterior };
std::string_view to_string(Location loc);

// Open interval {t : X0 + tD in the open cone}; endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Tolerances {
  double boundary_band = 1e-10;
  double bisection_rel = 1e-12;
  int bisection_iters = 200;
};

namespace detail {
class BodyModel {
 public:
  virtual ~BodyModel() = default;
  virtual bool in_cone(const Vec& X) const = 0;
  virtual Interval cone_interval(const Vec& X0, const Vec& D) const = 0;
};
}  // namespace detail

// A properly convex open domain Ω ⊂ P^n, stored as one nappe of an open convex cone
// C ⊂ R^{n+1} on which the patch covector is positive.
class ConvexBody {
 public:
  using Predicate = std::function<bool(const Vec&)>;

  static ConvexBody ellipsoid(const Mat& Q, std::optional<Vec> patch = {}, std::optional<Vec> witness = {});
  // Rows are covectors; the cone is {F X > 0}.
  static ConvexBody polytope_h(const Mat& facets, std::optional<Vec> patch = {}, std::optional<Vec> witness = {});
  static ConvexBody simplex(const Mat& facets, std::optional<Vec> patch = {}, std::optional<Vec> witness = {});
  // Columns are vertex lifts.
  static ConvexBody polytope_v(const Mat& vertices, std::optional<Vec> patch = {}, std::optional<Vec> witness = {});
  // Vertex hull with a facet list supplied by the caller; validated, falls back to LP when invalid.
  static ConvexBody orbit_hull(const Mat& vertices, const Mat& facets, std::optional<Vec> patch = {},
                               std::optional<Vec> witness = {});
  // Projectivized cone of positive definite m×m matrices, coordinates = upper triangle row-major.
  static ConvexBody pos_cone(int m);
  // Join of the base (embedded into a hyperplane by the columns of embed) with an apex.
  static ConvexBody cone_join(const ConvexBody& base, const Mat& embed, const Vec& apex);
  // Membership oracle receives patch-normalized lifts (patch(X) = 1).
  static ConvexBody oracle(int dim, Predicate member, const Vec& patch, const Vec& witness,
                           bool properly_convex = true, std::string description = "oracle");

  int dim() const { return size_ - 1; }
  int size() const { return size_; }
  BodyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  ConvexBody with_name(std::string name) const;
  bool properly_convex() const { return properly_convex_; }

  const Vec& patch() const { return patch_; }
  const Vec& witness() const { return witness_; }  // patch(witness) = 1

  // chart frame: patch-normalized X = origin + basis * y
  const Vec& chart_origin() const { return origin_; }
  const Mat& chart_basis() const { return basis_; }
  Vec to_chart(const Vec& X) const;   // X patch-normalized
  Vec from_chart(const Vec& y) const;

  // Patch-normalized positive lift of [X]; nullopt if patch(X) is (numerically) zero.
  std::optional<Vec> normalize(const Vec& X) const;
  Vec normalize_or_throw(const ProjPoint& p) const;

  const std::optional<Mat>& quadratic_form() const { return Q_; }
  const std::optional<Mat>& facets() const { return F_; }
  const std::optional<Mat>& vertices() const { return V_; }
  int pos_cone_size() const { return pos_m_; }
  const nlohmann::json& params() const { return params_; }
  const nlohmann::json& provenance() const { return provenance_; }
  ConvexBody with_provenance(nlohmann::json provenance) const;

  bool in_cone(const Vec& X) const;
  Interval cone_interval(const Vec& X0, const Vec& D) const;

  const Tolerances& tolerances() const { return tol_; }

 private:
  ConvexBody() = default;
  void finish(std::optional<Vec> patch, std::optional<Vec> witness);

  int size_ = 0;
  BodyKind kind_ = BodyKind::Oracle;
  std::string name_;
  bool properly_convex_ = true;
  Vec patch_, witness_, origin_;
  Mat basis_;
  std::optional<Mat> Q_, F_, V_;
  int pos_m_ = 0;
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json provenance_;
  Tolerances tol_;
  std::shared_ptr<const detail::BodyModel> model_;
};

struct Chord {
  ProjPoint x_minus, x_plus;
  Vec base;       // patch-normalized lift of the query point
  Vec direction;  // patch direction, unit Euclidean length in the chart
  double t_minus = 0.0, t_plus = 0.0;
};

Location contains(const ConvexBody& body, const ProjPoint& p);
Location locate(const ConvexBody& body, const Vec& X, double band);

// dir: either chart coordinates (size n) or a vector of V (size n+1).
Chord chord(const ConvexBody& body, const ProjPoint& a, const Vec& dir);

struct SupportOptions {
  int samples = 400;
  std::uint64_t seed = 7;
};
std::vector<ProjHyperplane> supporting_cone(const ConvexBody& body, const ProjPoint& p, const SupportOptions& opts = {});

struct BoundaryProbe {
  bool is_C1 = false;
  bool is_strictly_convex_point = false;
  double angular_spread = 0.0;
  int segments_found = 0;
};
BoundaryProbe boundary_probe(const ConvexBody& body, const ProjPoint& p, int samples = 200, std::uint64_t seed = 11,
                             double angular_tol = 1e-4);

// Directions at p, as an oracle body in P(V/⟨p⟩) with coordinates y ↦ basis * y.
struct DirectionSpace {
  ConvexBody body;
  Mat basis;  // (n+1) × n, orthonormal complement of p
  bool c1 = false;
};
DirectionSpace space_of_directions(const ConvexBody& body, const ProjPoint& p);

struct BenzecriChart {
  ProjMap tau;
  double R_achieved = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  int directions = 0;
};

class BenzecriTargetNotMet : public Error {
 public:
  BenzecriTargetNotMet(BenzecriChart best, double target);
  const BenzecriChart& best() const { return best_; }

 private:
  BenzecriChart best_;
};

BenzecriChart benzecri_chart(const ConvexBody& body, const ProjPoint& p, double R_target, int directions = 2000,
                             std::uint64_t seed = 5);
// Radii of the boundary of tau(Ω) around 0 in the standard chart, over a direction grid.
std::pair<double, double> benzecri_radii(const ConvexBody& body, const ProjPoint& p, const ProjMap& tau,
                                         int directions = 2000, std::uint64_t seed = 5);

ConvexBody make_example(const std::string& name, const nlohmann::json& params);
// "klein_ball(3)", "sl5_orbit_hull(200)", "square", ...
ConvexBody make_example(const std::string& spec_string);

// sampling helpers
Vec sample_interior(const ConvexBody& body, Rng& rng, int steps = 6);
Vec sample_boundary(const ConvexBody& body, Rng& rng);
Vec boundary_point_toward(const ConvexBody& body, const Vec& from, const Vec& toward);
Vec random_patch_direction(const ConvexBody& body, Rng& rng);  // φ(D)=0, unit

// Polytope utilities (brute force over subsets; desk-scale sizes).
Mat enumerate_facets(const Mat& vertices, const Vec& interior);  // rows, positive on interior
Mat enumerate_vertices(const Mat& facets, const Vec& patch);      // columns, patch-normalized
Mat polytope_vertices(const ConvexBody& body);                     // columns, patch-normalized

}  // namespace hilbert
