#include "hilbert/scene.hpp"

#include "hilbert/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hilbert {

json to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json to_json(const Mat& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected a JSON array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::InvalidInput, "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(ErrorCode::InvalidInput, "expected a matrix");
  const size_t rows = j.size(), cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw Error(ErrorCode::InvalidInput, "ragged matrix");
    for (size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw Error(ErrorCode::InvalidInput, "matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

namespace {

std::optional<Vec> optional_vec(const json& scene, const char* key) {
  if (scene.contains(key) && !scene.at(key).is_null()) return vec_from_json(scene.at(key));
  return std::nullopt;
}

const json& param(const json& params, const char* key) {
  if (!params.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("scene params missing '") + key + "'");
  return params.at(key);
}

}  // namespace

ConvexBody body_from_scene(const json& scene) {
  if (!scene.is_object() || !scene.contains("kind")) throw Error(ErrorCode::InvalidInput, "scene needs a 'kind'");
  const std::string kind = scene.at("kind").get<std::string>();
  const json params = scene.value("params", json::object());
  auto witness = optional_vec(scene, "witness");
  auto patch = optional_vec(scene, "patch");
  ConvexBody body = [&]() -> ConvexBody {
    if (kind == "ellipsoid") return ConvexBody::ellipsoid(mat_from_json(param(params, "form")), patch, witness);
    if (kind == "polytope_h") return ConvexBody::polytope_h(mat_from_json(param(params, "facets")), patch, witness);
    if (kind == "simplex") return ConvexBody::simplex(mat_from_json(param(params, "facets")), patch, witness);
    if (kind == "polytope_v")
      return ConvexBody::polytope_v(mat_from_json(param(params, "vertices")).transpose(), patch, witness);
    if (kind == "orbit_hull")
      return ConvexBody::orbit_hull(mat_from_json(param(params, "vertices")).transpose(),
                                    mat_from_json(param(params, "facets")), patch, witness);
    if (kind == "pos_cone") return ConvexBody::pos_cone(param(params, "m").get<int>());
    if (kind == "cone_join")
      return ConvexBody::cone_join(body_from_scene(param(params, "base")), mat_from_json(param(params, "embedding")),
                                   vec_from_json(param(params, "apex")));
    if (kind == "example") return make_example(param(params, "name").get<std::string>(), params);
    if (kind == "oracle") throw Error(ErrorCode::InvalidInput, "oracle bodies cannot be loaded from a scene");
    return make_example(kind, params);
  }();
  if (scene.contains("dim") && scene.at("dim").get<int>() != body.dim())
    throw Error(ErrorCode::InvalidInput, "scene 'dim' does not match the body");
  if (scene.contains("name")) body = body.with_name(scene.at("name").get<std::string>());
  if (scene.contains("dual_of")) body = body.with_provenance({{"dual_of", scene.at("dual_of")}});
  return body;
}

json scene_from_body(const ConvexBody& body) {
  json j;
  j["dim"] = body.dim();
  const auto& prov = body.provenance();
  if (prov.is_object() && prov.contains("example")) {
    j["kind"] = prov.at("example");
    j["params"] = prov.value("params", json::object());
  } else {
    j["kind"] = std::string(to_string(body.kind()));
    j["params"] = body.params();
  }
  j["name"] = body.name();
  j["patch"] = to_json(body.patch());
  j["witness"] = to_json(body.witness());
  if (prov.is_object() && prov.contains("dual_of")) j["dual_of"] = prov.at("dual_of");
  return j;
}

std::vector<ProjMap> generators_from_json(const json& j) {
  const json& gens = j.is_object() ? j.at("generators") : j;
  if (!gens.is_array()) throw Error(ErrorCode::InvalidInput, "generators must be an array of matrices");
  std::vector<ProjMap> out;
  if (!gens.empty() && gens[0].is_array() && !gens[0].empty() && gens[0][0].is_number()) {
    out.emplace_back(mat_from_json(gens));
    return out;
  }
  for (const auto& g : gens) out.emplace_back(mat_from_json(g));
  return out;
}

json load_json_argument(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && arg.front() != '{' && arg.front() != '[' && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return json::parse(ss.str());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, "cannot parse " + arg + ": " + e.what());
    }
  }
  try {
    return json::parse(arg);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "argument is neither a file nor valid JSON: " + arg);
  }
}

ProjPoint point_from_json(const json& j, int ambient_size) {
  const Vec v = vec_from_json(j);
  if (v.size() == ambient_size - 1) return ProjPoint::from_affine(v);
  if (v.size() == ambient_size) return ProjPoint(v);
  throw Error(ErrorCode::InvalidInput, "point has the wrong number of coordinates");
}

}  // namespace hilbert
