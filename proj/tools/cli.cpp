#include "cli.hpp"

#include "hilbert/hilbert.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace hilbert::cli {

namespace {

struct Config {
  std::string command;
  std::uint64_t seed = 1;
  long samples = -1;
  std::map<std::string, double> tol;
  std::string out;

  long samples_or(long fallback) const { return samples > 0 ? samples : fallback; }
  double tol_or(const std::string& name, double fallback) const {
    const auto it = tol.find(name);
    return it == tol.end() ? fallback : it->second;
  }
};

const std::map<std::string, std::set<std::string>> kTolerances = {
    {"distance", {"boundary_band"}},
    {"classify", {"unit_band"}},
    {"ball", {}},
    {"horosphere", {}},
    {"busemann", {"busemann"}},
    {"dual", {}},
    {"charfun", {}},
    {"volume", {}},
    {"thinness", {"pet"}},
    {"petsearch", {}},
    {"thinpart", {}},
    {"demo", {"paraboloid", "sphere"}},
};

// Pulls --tol.<name>[=value| value] out of the argument list.
std::vector<std::string> extract_tolerances(const std::vector<std::string>& args, std::map<std::string, double>& tol) {
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6), value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < args.size()) {
      value = args[++i];
    } else {
      throw Error(ErrorCode::InvalidInput, "missing value for --tol." + name);
    }
    try {
      size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size() || !(v > 0)) throw std::invalid_argument(value);
      tol[name] = v;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidInput, "tolerance --tol." + name + " needs a positive number");
    }
  }
  return rest;
}

ConvexBody load_body(const std::string& arg) {
  if (arg.empty()) throw Error(ErrorCode::InvalidInput, "--scene is required");
  if (arg.front() == '{' || arg.find(".json") != std::string::npos) return body_from_scene(load_json_argument(arg));
  return make_example(arg);
}

ProjPoint load_point(const std::string& arg, int ambient) { return point_from_json(load_json_argument(arg), ambient); }

json config_json(const Config& c) {
  json t = json::object();
  for (const auto& [k, v] : c.tol) t[k] = v;
  json j = {{"command", c.command}, {"seed", c.seed}, {"tolerances", t}};
  j["samples"] = c.samples > 0 ? json(c.samples) : json(nullptr);
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

json points_json(const std::vector<Vec>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << text;
}

// Numbers in JSON must be finite.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Config cfg;
  std::vector<std::string> args;
  try {
    args = extract_tolerances(raw_args, cfg.tol);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"Hilbert geometry of convex projective domains", "hilbert"};
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample budget (command default when omitted)");
  app.add_option("--out", cfg.out, "CSV output path for point clouds");

  std::string scene, from, to, matrix, center, p_arg, q_arg, H_arg, r_arg, x_arg, triangle, group, demo_name;
  double radius = 1.0, level = 0.0, T_max = 20.0, delta = 3.0, eps = 0.3;
  int budget = 0, L = 4, grid = 25, n = 2;
  bool has_level = false;

  auto with_scene = [&](CLI::App* sub) {
    sub->add_option("--scene", scene, "scene JSON (file or inline) or example name")->required();
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--samples", cfg.samples, "sample budget");
    sub->add_option("--out", cfg.out, "CSV output path");
    return sub;
  };
  auto* c_distance = with_scene(app.add_subcommand("distance", "Hilbert distance between two points"));
  c_distance->add_option("--from", from)->required();
  c_distance->add_option("--to", to)->required();
  auto* c_classify = with_scene(app.add_subcommand("classify", "classify a projective isometry"));
  c_classify->add_option("--matrix", matrix)->required();
  c_classify->add_option("--budget", budget, "evaluations for the empirical translation length");
  auto* c_ball = with_scene(app.add_subcommand("ball", "boundary sample of a Hilbert ball"));
  c_ball->add_option("--center", center)->required();
  c_ball->add_option("--radius", radius)->required();
  auto* c_horo = with_scene(app.add_subcommand("horosphere", "horosphere height or level set"));
  c_horo->add_option("--p", p_arg)->required();
  c_horo->add_option("--H", H_arg, "supporting covector at p");
  c_horo->add_option("--r", r_arg, "second boundary point");
  c_horo->add_option("--q", q_arg, "interior point whose height is reported");
  c_horo->add_option("--level", level, "emit the level set S_t")->each([&](const std::string&) { has_level = true; });
  c_horo->add_option("--grid", grid, "horizontal grid size per axis");
  auto* c_buse = with_scene(app.add_subcommand("busemann", "Busemann function at a C1 boundary point"));
  c_buse->add_option("--p", p_arg)->required();
  c_buse->add_option("--q", q_arg)->required();
  c_buse->add_option("--tmax", T_max);
  auto* c_dual = with_scene(app.add_subcommand("dual", "dual domain as a scene"));
  auto* c_char = with_scene(app.add_subcommand("charfun", "characteristic function of the cone"));
  c_char->add_option("--x", x_arg)->required();
  auto* c_vol = with_scene(app.add_subcommand("volume", "Busemann volume of a Hilbert ball"));
  c_vol->add_option("--center", center)->required();
  c_vol->add_option("--radius", radius)->required();
  auto* c_thin = with_scene(app.add_subcommand("thinness", "thinness of a straight triangle"));
  c_thin->add_option("--triangle", triangle, "three points as a JSON array")->required();
  auto* c_pet = with_scene(app.add_subcommand("petsearch", "search for a fat triangle"));
  c_pet->add_option("--delta", delta);
  c_pet->add_option("--budget", budget);
  auto* c_tp = with_scene(app.add_subcommand("thinpart", "thin part of a group action on a grid"));
  c_tp->add_option("--group", group)->required();
  c_tp->add_option("--eps", eps);
  c_tp->add_option("--L", L);
  c_tp->add_option("--grid", grid);
  auto* c_demo = app.add_subcommand("demo", "built-in demonstrations");
  c_demo->add_option("name", demo_name, "ellipsoid-characterization")->required();
  c_demo->add_option("--n", n);
  c_demo->add_option("--grid", grid);
  c_demo->add_option("--seed", cfg.seed);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    for (const auto& [name, v] : cfg.tol) {
      (void)v;
      if (!kTolerances.at(cfg.command).count(name))
        throw Error(ErrorCode::InvalidInput, "unknown tolerance --tol." + name + " for " + cfg.command);
    }
    json result;

    if (sub == c_distance) {
      ConvexBody body = load_body(scene);
      const ProjPoint a = load_point(from, body.size()), b = load_point(to, body.size());
      if (cfg.tol.count("boundary_band")) {
        // locate with the requested band before measuring
        for (const auto* p : {&a, &b})
          if (locate(body, p->coords(), cfg.tol_or("boundary_band", 1e-10)) != Location::Interior)
            throw Error(ErrorCode::NotInterior, "point is not interior");
      }
      result["distance"] = hilbert_distance(body, a, b);
    } else if (sub == c_classify) {
      ConvexBody body = load_body(scene);
      const auto gens = generators_from_json(load_json_argument(matrix));
      IsometryOptions o;
      o.unit_band = cfg.tol_or("unit_band", o.unit_band);
      o.seed = cfg.seed;
      const auto cls = classify(body, gens.front(), o);
      result = to_json(cls);
      if (cls.kind == IsometryKind::Parabolic) result["jnf"] = to_json(parabolic_jnf_check(gens.front(), o.unit_band));
      if (budget > 0) {
        const auto est = empirical_translation_length(body, gens.front(), budget, cfg.seed);
        result["empirical_translation_length"] = {{"estimate", est.estimate},
                                                  {"history", est.history},
                                                  {"checkpoints", est.checkpoints}};
      }
    } else if (sub == c_ball) {
      ConvexBody body = load_body(scene);
      const auto pts = metric_ball(body, load_point(center, body.size()), radius,
                                   static_cast<int>(cfg.samples_or(200)), cfg.seed);
      result["count"] = pts.size();
      result["radius"] = radius;
      if (cfg.out.empty()) result["points"] = points_json(pts);
      else write_file(cfg.out, points_csv(pts));
    } else if (sub == c_horo) {
      ConvexBody body = load_body(scene);
      std::optional<Vec> H;
      if (!H_arg.empty()) H = vec_from_json(load_json_argument(H_arg));
      std::optional<ProjPoint> r;
      if (!r_arg.empty()) r = load_point(r_arg, body.size());
      const ParabolicChart chart = make_chart(body, load_point(p_arg, body.size()), H, r);
      result["chart"] = {{"H", to_json(chart.H)}, {"r", to_json(chart.R)}, {"matrix", to_json(chart.C)}};
      if (!q_arg.empty()) result["height"] = horosphere_height(chart, load_point(q_arg, body.size()));
      if (has_level) {
        const int m = body.dim() - 1;
        std::vector<Vec> us;
        std::vector<int> idx(static_cast<size_t>(m), 0);
        for (bool done = m == 0; ; ) {
          Vec u(m);
          for (int j = 0; j < m; ++j) u(j) = -2.0 + 4.0 * idx[static_cast<size_t>(j)] / std::max(1, grid - 1);
          us.push_back(u);
          if (done) break;
          int j = 0;
          while (j < m && ++idx[static_cast<size_t>(j)] == grid) idx[static_cast<size_t>(j++)] = 0;
          if (j == m) break;
        }
        const auto pts = horosphere_points(chart, level, us);
        result["level"] = level;
        result["count"] = pts.size();
        if (cfg.out.empty()) result["points"] = points_json(pts);
        else write_file(cfg.out, points_csv(pts));
      }
    } else if (sub == c_buse) {
      ConvexBody body = load_body(scene);
      const ProjPoint p = load_point(p_arg, body.size()), q = load_point(q_arg, body.size());
      BusemannOptions o;
      o.T_max = T_max;
      o.tol = cfg.tol_or("busemann", o.tol);
      const BusemannResult b = busemann(body, p, q, o);
      const ParabolicChart chart = make_chart(body, p);
      result = {{"value", b.value},
                {"closed_form", busemann_closed_form(chart, q)},
                {"gap", b.gap},
                {"t_reached", b.t_reached},
                {"converged", b.converged},
                {"T_max", o.T_max}};
    } else if (sub == c_dual) {
      result["dual"] = scene_from_body(dual_domain(load_body(scene), 400, cfg.seed));
    } else if (sub == c_char) {
      ConvexBody body = load_body(scene);
      Vec x = vec_from_json(load_json_argument(x_arg));
      if (x.size() == body.dim()) {
        x.conservativeResize(body.size());
        x(body.dim()) = 1.0;
      }
      const long m = cfg.samples_or(100000);
      const CharEstimate e = characteristic_function(body, x, m, cfg.seed);
      result = {{"estimate", e.estimate}, {"std_error", e.std_error}, {"samples", e.samples}};
      if (const auto cf = characteristic_closed_form(body, x)) result["closed_form"] = *cf;
    } else if (sub == c_vol) {
      ConvexBody body = load_body(scene);
      const ProjPoint c = load_point(center, body.size());
      const Vec C = body.normalize_or_throw(c);
      const auto box = hilbert_ball_box(body, c, radius);
      const VolumeEstimate v = busemann_volume(
          body, [&](const Vec& X) { return hilbert_distance(body, C, X) <= radius; }, box.first, box.second,
          cfg.samples_or(200000), cfg.seed);
      result = {{"estimate", v.estimate},
                {"std_error", v.std_error},
                {"samples", v.samples},
                {"rejected", v.rejected},
                {"box", {to_json(box.first), to_json(box.second)}}};
    } else if (sub == c_thin) {
      ConvexBody body = load_body(scene);
      const json t = load_json_argument(triangle);
      if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::InvalidInput, "triangle needs three points");
      const StraightTriangle T{point_from_json(t[0], body.size()), point_from_json(t[1], body.size()),
                               point_from_json(t[2], body.size())};
      ThinnessOptions o;
      if (cfg.samples > 0) o.samples = static_cast<int>(cfg.samples);
      const ThinnessResult th = triangle_thinness(body, T, o);
      result = {{"delta", th.delta},
                {"nudged", th.nudged},
                {"nudge", o.nudge},
                {"samples_per_side", th.samples},
                {"pet", pet_check(body, T, 50, cfg.tol_or("pet", 1e-8))}};
    } else if (sub == c_pet) {
      ConvexBody body = load_body(scene);
      const FatSearchResult r = fat_triangle_search(body, delta, budget > 0 ? budget : 200, cfg.seed);
      result = {{"found", r.witness.has_value()}, {"best_delta", r.best_delta}, {"evaluated", r.evaluated},
                {"delta_target", delta}};
      if (r.witness) {
        const auto& w = *r.witness;
        result["triangle"] = {to_json(w.triangle.a.canonical()), to_json(w.triangle.b.canonical()),
                              to_json(w.triangle.c.canonical())};
        result["delta"] = w.delta;
        result["pet"] = pet_check(body, w.triangle);
      }
    } else if (sub == c_tp) {
      ConvexBody body = load_body(scene);
      const GroupBall ball = enumerate_ball(generators_from_json(load_json_argument(group)), L);
      const auto pts = thin_part_sample(body, ball, eps, interior_grid(body, grid));
      std::map<std::string, int> kinds;
      int thin = 0;
      for (const auto& p : pts) {
        if (p.thin) {
          ++thin;
          ++kinds[p.witness_kind];
        }
      }
      result = {{"points", pts.size()}, {"thin", thin}, {"thin_kinds", kinds}, {"eps", eps}, {"L", L},
                {"elements", ball.elements.size()}};
      if (!cfg.out.empty()) write_file(cfg.out, thin_part_csv(pts));
      else {
        json rows = json::array();
        for (const auto& p : pts)
          rows.push_back({{"x", to_json(p.X)}, {"inj", finite_or_null(p.inj)}, {"thin", p.thin}, {"kind", p.witness_kind}});
        result["grid"] = rows;
      }
    } else if (sub == c_demo) {
      if (demo_name != "ellipsoid-characterization")
        throw Error(ErrorCode::InvalidInput, "unknown demo '" + demo_name + "'");
      if (n < 1) throw Error(ErrorCode::InvalidInput, "--n must be at least 1");
      std::vector<Vec> us;
      if (n == 1) {
        for (int k = -2; k <= 2; ++k) us.push_back(Vec::Constant(1, k));
      } else {
        Rng rng(cfg.seed);
        for (int i = 0; i < std::max(grid, n + 2); ++i) us.push_back(2.0 * rng.normal_vector(n));
      }
      const auto rep = ellipsoid_characterization_demo(n, us);
      result = to_json(rep);
      result["all_orbit_points_on_paraboloid"] = rep.paraboloid_residual <= cfg.tol_or("paraboloid", 1e-12);
      result["ball_images_on_sphere"] = rep.sphere_residual <= cfg.tol_or("sphere", 1e-9);
    }
    result["config"] = config_json(cfg);
    out << result.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace hilbert::cli
