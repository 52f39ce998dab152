#include "hilbert/hyperbolicity.hpp"

#include "hilbert/error.hpp"
#include "hilbert/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace hilbert {

namespace {

constexpr double kGolden = 0.6180339887498949;

// argmin of a unimodal f on [lo, hi]
std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-7) {
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Grid search on [0,1] followed by golden-section refinement in the bracket of the best node.
double refined_min(const std::function<double(double)>& f, int samples) {
  double best = std::numeric_limits<double>::infinity();
  int bi = 0;
  for (int i = 0; i <= samples; ++i) {
    const double v = f(static_cast<double>(i) / samples);
    if (v < best) {
      best = v;
      bi = i;
    }
  }
  const double lo = std::max(0, bi - 1) / static_cast<double>(samples);
  const double hi = std::min(samples, bi + 1) / static_cast<double>(samples);
  return std::min(best, golden_min(f, lo, hi).second);
}

double distance_to_side(const ConvexBody& body, const Vec& x, const Vec& p, const Vec& q, int samples) {
  return refined_min([&](double s) { return hilbert_distance(body, x, Vec(p + s * (q - p))); }, samples);
}

}  // namespace

std::array<Vec, 3> triangle_vertices(const ConvexBody& body, const StraightTriangle& T, double nudge, bool* nudged) {
  std::array<Vec, 3> v;
  const std::array<const ProjPoint*, 3> in{&T.a, &T.b, &T.c};
  Mat M(body.size(), 3);
  for (int i = 0; i < 3; ++i) {
    if (in[i]->size() != body.size()) throw Error(ErrorCode::InvalidInput, "vertex dimension does not match the body");
    v[i] = body.normalize_or_throw(*in[i]);
    M.col(i) = v[i].normalized();
  }
  if (numerical_rank(M, 1e-9) < 3) throw Error(ErrorCode::DegenerateTriangle, "vertices are projectively dependent");
  const Vec centroid = (v[0] + v[1] + v[2]) / 3.0;
  if (nudged) *nudged = false;
  for (auto& x : v) {
    const Location loc = locate(body, x, body.tolerances().boundary_band);
    if (loc == Location::Interior) continue;
    if (loc == Location::Exterior && locate(body, x, 1e-7) == Location::Exterior)
      throw Error(ErrorCode::NotInterior, "triangle vertex lies outside the closure");
    x = x + nudge * (centroid - x);
    if (nudged) *nudged = true;
    if (locate(body, x, 0.0) != Location::Interior)
      throw Error(ErrorCode::DegenerateTriangle, "nudged vertex is not interior");
  }
  return v;
}

ThinnessResult triangle_thinness(const ConvexBody& body, const StraightTriangle& T, const ThinnessOptions& opts) {
  ThinnessResult out;
  const auto v = triangle_vertices(body, T, opts.nudge, &out.nudged);
  out.samples = opts.samples;
  out.delta = 0.0;
  for (int side = 0; side < 3; ++side) {
    const Vec& p = v[static_cast<size_t>(side)];
    const Vec& q = v[static_cast<size_t>((side + 1) % 3)];
    const Vec& r = v[static_cast<size_t>((side + 2) % 3)];
    auto gap = [&](double s) {
      const Vec x = p + s * (q - p);
      return std::min(distance_to_side(body, x, q, r, opts.samples), distance_to_side(body, x, r, p, opts.samples));
    };
    // maximize gap: coarse scan then golden refinement of −gap
    double best = -1.0;
    int bi = 0;
    for (int i = 0; i <= opts.samples; ++i) {
      const double g = gap(static_cast<double>(i) / opts.samples);
      if (g > best) {
        best = g;
        bi = i;
      }
    }
    const double lo = std::max(0, bi - 1) / static_cast<double>(opts.samples);
    const double hi = std::min(opts.samples, bi + 1) / static_cast<double>(opts.samples);
    const auto refined = golden_min([&](double s) { return -gap(s); }, lo, hi, 1e-6);
    double s_best = static_cast<double>(bi) / opts.samples;
    if (-refined.second > best) {
      best = -refined.second;
      s_best = refined.first;
    }
    if (best > out.delta) {
      out.delta = best;
      out.argmax = p + s_best * (q - p);
    }
  }
  return out;
}

Incenter incenter(const ConvexBody& body, const StraightTriangle& T, int samples, std::uint64_t seed,
                  const ThinnessOptions& opts) {
  const auto v = triangle_vertices(body, T, opts.nudge);
  auto point = [&](double s, double t) { return Vec((1.0 - s - t) * v[0] + s * v[1] + t * v[2]); };
  auto radius = [&](double s, double t) {
    if (s <= 0 || t <= 0 || s + t >= 1) return -1.0;
    const Vec x = point(s, t);
    double r = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
      r = std::min(r, distance_to_side(body, x, v[static_cast<size_t>(k)], v[static_cast<size_t>((k + 1) % 3)],
                                       opts.samples));
    return r;
  };
  Rng rng(seed);
  double bs = 1.0 / 3.0, bt = 1.0 / 3.0, br = radius(bs, bt);
  for (int i = 0; i < samples; ++i) {
    double s = rng.uniform(), t = rng.uniform();
    if (s + t > 1) {
      s = 1 - s;
      t = 1 - t;
    }
    const double r = radius(s, t);
    if (r > br) {
      br = r;
      bs = s;
      bt = t;
    }
  }
  // the objective is a min of three side distances, so the ascent direction often runs along a ridge
  // where two of them agree; 16 compass directions follow such ridges well enough
  std::array<std::pair<double, double>, 16> dirs;
  for (size_t i = 0; i < dirs.size(); ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(dirs.size());
    dirs[i] = {std::cos(a), std::sin(a)};
  }
  for (double step = 0.05; step > 1e-9;) {
    double gain = 0.0;
    std::pair<double, double> move{0.0, 0.0};
    for (const auto& d : dirs) {
      const double r = radius(bs + step * d.first, bt + step * d.second);
      if (r - br > gain) {
        gain = r - br;
        move = {step * d.first, step * d.second};
      }
    }
    if (gain > 0.0) {
      br += gain;
      bs += move.first;
      bt += move.second;
    } else {
      step *= 0.5;
    }
  }
  return {point(bs, bt), br};
}

bool pet_check(const ConvexBody& body, const StraightTriangle& T, int samples, double tol) {
  std::array<Vec, 3> v;
  const std::array<const ProjPoint*, 3> in{&T.a, &T.b, &T.c};
  Mat M(body.size(), 3);
  for (int i = 0; i < 3; ++i) {
    v[static_cast<size_t>(i)] = body.normalize_or_throw(*in[static_cast<size_t>(i)]);
    M.col(i) = v[static_cast<size_t>(i)].normalized();
  }
  if (numerical_rank(M, 1e-9) < 3) throw Error(ErrorCode::DegenerateTriangle, "vertices are projectively dependent");
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i <= samples; ++i) {
      const double s = static_cast<double>(i) / samples;
      const Vec x = v[static_cast<size_t>(k)] + s * (v[static_cast<size_t>((k + 1) % 3)] - v[static_cast<size_t>(k)]);
      if (locate(body, x, tol) != Location::Boundary) return false;
    }
  Rng rng(3);
  for (int i = 0; i < samples; ++i) {
    double s = rng.uniform(0.01, 0.98), t = rng.uniform(0.01, 0.98);
    if (s + t > 0.99) {
      s = 0.99 - s;
      t = 0.99 - t;
    }
    s = std::max(s, 0.005);
    t = std::max(t, 0.005);
    const Vec x = (1.0 - s - t) * v[0] + s * v[1] + t * v[2];
    if (locate(body, x, tol) != Location::Interior) return false;
  }
  return true;
}

FatSearchResult fat_triangle_search(const ConvexBody& body, double delta_target, int budget, std::uint64_t seed) {
  FatSearchResult out;
  const ThinnessOptions coarse{40, 1e-6};
  auto measure = [&](const std::array<Vec, 3>& v, const ThinnessOptions& o) -> double {
    try {
      ++out.evaluated;
      return triangle_thinness(body, {ProjPoint(v[0]), ProjPoint(v[1]), ProjPoint(v[2])}, o).delta;
    } catch (const Error&) {
      return -1.0;
    }
  };
  auto confirm = [&](const std::array<Vec, 3>& v) {
    const double d = measure(v, ThinnessOptions{});
    out.best_delta = std::max(out.best_delta, d);
    if (d >= delta_target) {
      out.witness = FatTriangle{{ProjPoint(v[0]), ProjPoint(v[1]), ProjPoint(v[2])}, d, out.evaluated};
      return true;
    }
    return false;
  };
  // vertex triples of polytopes first
  if (body.vertices() || body.facets()) {
    const Mat V = polytope_vertices(body);
    const int k = static_cast<int>(V.cols());
    Rng rng(seed);
    for (int it = 0; it < budget / 2 && out.evaluated < budget; ++it) {
      int i = rng.index(k), j = rng.index(k), l = rng.index(k);
      if (it == 0) i = 0, j = 1 % k, l = 2 % k;
      if (i == j || j == l || i == l) continue;
      const std::array<Vec, 3> v{V.col(i), V.col(j), V.col(l)};
      const double d = measure(v, coarse);
      out.best_delta = std::max(out.best_delta, d);
      if (d >= delta_target && confirm(v)) return out;
    }
  }
  // random boundary triangles with hill climbing on thinness
  Rng rng(seed + 1);
  while (out.evaluated < budget) {
    std::array<Vec, 3> v{sample_boundary(body, rng), sample_boundary(body, rng), sample_boundary(body, rng)};
    double d = measure(v, coarse);
    for (int step = 0; step < 20 && out.evaluated < budget; ++step) {
      const size_t which = static_cast<size_t>(rng.index(3));
      std::array<Vec, 3> w = v;
      const Vec target = v[which] + 0.2 * random_patch_direction(body, rng);
      try {
        w[which] = boundary_point_toward(body, body.witness(), target);
      } catch (const Error&) {
        continue;
      }
      const double dw = measure(w, coarse);
      if (dw > d) {
        d = dw;
        v = w;
      }
    }
    out.best_delta = std::max(out.best_delta, d);
    if (d >= delta_target && confirm(v)) return out;
  }
  return out;
}

}  // namespace hilbert
