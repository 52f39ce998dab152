#pragma once

#include "hilbert/domain.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/projlin.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace hilbert {

using json = nlohmann::json;

json to_json(const Vec& v);
json to_json(const Mat& m);  // row-major array of arrays
Vec vec_from_json(const json& j);
Mat mat_from_json(const json& j);

// Scene JSON: {"dim", "kind", "params", "witness", optional "patch", "name", "dual_of"}.
ConvexBody body_from_scene(const json& scene);
json scene_from_body(const ConvexBody& body);

// Group JSON: {"generators": [matrix, ...]}
std::vector<ProjMap> generators_from_json(const json& j);

// Reads a file if the argument names one, otherwise parses the argument as inline JSON.
json load_json_argument(const std::string& arg);

// Affine point in the standard chart ([x : 1]) or a full homogeneous vector.
ProjPoint point_from_json(const json& j, int ambient_size);

}  // namespace hilbert
