#pragma once

#include "hilbert/domain.hpp"

#include <optional>
#include <vector>

namespace hilbert {

// Affine chart with H at infinity, r at the origin and p the vertical direction e_n.
// Chart coordinates are (u, s): u horizontal (n−1 entries), s vertical.
struct ParabolicChart {
  ConvexBody body;
  Vec P;    // lift of p with nu(P) = 1
  Vec R;    // lift of r with H(R) = 1
  Vec H;    // supporting covector at p
  Vec nu;   // supporting covector at r, nu(P) = 1
  Mat C;    // rows: horizontal covectors, nu, H
  Mat Cinv;
};

ParabolicChart make_chart(const ConvexBody& body, const ProjPoint& p, std::optional<Vec> H = {},
                          std::optional<ProjPoint> r = {});

Vec chart_coordinates(const ParabolicChart& chart, const Vec& X);  // throws if H(X) <= 0
Vec chart_lift(const ParabolicChart& chart, const Vec& y);          // patch-normalized

// Lower end f(u) of the vertical chord over u; nullopt outside the radial shadow U.
std::optional<double> boundary_graph(const ParabolicChart& chart, const Vec& u);

// q in the closure minus p; boundary points give 0.
double horosphere_height(const ParabolicChart& chart, const ProjPoint& q);
double horosphere_height(const ParabolicChart& chart, const Vec& X);

// Points of S_t over the given horizontal positions, as patch-normalized lifts.
std::vector<Vec> horosphere_points(const ParabolicChart& chart, double t, const std::vector<Vec>& us);

ProjMap vertical_translation(const ParabolicChart& chart, double t);

// τ(B) = λ₊/λ₋ for B in the stabilizer of (Ω, H, p).
double tau(const ParabolicChart& chart, const ProjMap& B, double unit_band = 1e-7);
// log τ(B); exactly 0 when every eigenvalue modulus is 1 within the band.
double displacement(const ParabolicChart& chart, const ProjMap& B, double unit_band = 1e-7);

struct BusemannOptions {
  double T_max = 20.0;
  double step = 0.5;
  double tol = 1e-6;
};

struct BusemannResult {
  double value = 0.0;
  double gap = 0.0;  // last successive difference
  double t_reached = 0.0;
  bool converged = false;
  std::vector<double> sequence;
};

// lim d(q, γ(t)) − t along the vertical ray γ(t) = (0, e^t) through the chart origin.
BusemannResult busemann(const ParabolicChart& chart, const ProjPoint& q, const BusemannOptions& opts = {});
// Builds the default chart at a C1 point p.
BusemannResult busemann(const ConvexBody& body, const ProjPoint& p, const ProjPoint& q,
                        const BusemannOptions& opts = {});
// −log(height) in the chart.
double busemann_closed_form(const ParabolicChart& chart, const ProjPoint& q);

// (n+2)×(n+2) unipotent T_u with first row (1, u, ½|u|²).
ProjMap translation_group_element(const Vec& u);
// [x0 : u : w] ↦ [x0 − w : √2 u : x0 + w]; carries the paraboloid x0 w = ½|u|² to the unit sphere.
ProjMap paraboloid_to_ball(int n);

struct CharacterizationReport {
  int n = 0;
  int points = 0;
  double paraboloid_residual = 0.0;   // max |x0 − ½|x|²|
  double sphere_residual = 0.0;       // max | |y| − 1 | for ball images
  double transitivity_residual = 0.0;  // max |T_{v−u} o_u − o_v|
  int hull_vertices = 0;
  int hull_facets = 0;
  Mat ball_map;
};

CharacterizationReport ellipsoid_characterization_demo(int n, const std::vector<Vec>& grid);
nlohmann::json to_json(const CharacterizationReport& r);

}  // namespace hilbert
