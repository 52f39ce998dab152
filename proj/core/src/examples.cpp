#include "hilbert/domain.hpp"
#include "hilbert/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <regex>

namespace hilbert {

namespace {

int int_param(const nlohmann::json& params, const char* key, int fallback) {
  if (params.is_object() && params.contains(key)) return params.at(key).get<int>();
  if (params.is_number_integer()) return params.get<int>();
  return fallback;
}

ConvexBody klein_ball(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "klein_ball needs n >= 1");
  Mat Q = Mat::Identity(n + 1, n + 1);
  Q(n, n) = -1.0;
  return ConvexBody::ellipsoid(Q, Vec(Vec::Unit(n + 1, n)), Vec(Vec::Unit(n + 1, n)));
}

ConvexBody orthant(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "simplex needs n >= 1");
  const int N = n + 1;
  return ConvexBody::simplex(Mat::Identity(N, N), Vec(Vec::Ones(N)), Vec(Vec::Ones(N) / N));
}

ConvexBody square() {
  Mat F(4, 3);
  F << -1, 0, 1,
        1, 0, 1,
        0, -1, 1,
        0, 1, 1;
  return ConvexBody::polytope_h(F, Vec(Vec::Unit(3, 2)), Vec(Vec::Unit(3, 2)));
}

// Vertical coordinate first: {x0 > |u|^2 / 2} with homogeneous [x0 : u : w].
ConvexBody paraboloid(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "paraboloid needs n >= 1");
  const int N = n + 1;
  Mat Q = Mat::Zero(N, N);
  for (int i = 1; i < n; ++i) Q(i, i) = 0.5;
  Q(0, N - 1) = -0.5;
  Q(N - 1, 0) = -0.5;
  Vec patch = Vec::Zero(N);
  patch(0) = 1.0;
  patch(N - 1) = 1.0;
  Vec w = Vec::Zero(N);
  w(0) = 1.0;
  w(N - 1) = 1.0;
  return ConvexBody::ellipsoid(Q, patch, w);
}

ConvexBody cone_over_disc() {
  const ConvexBody base = klein_ball(2);
  Mat E = Mat::Zero(4, 3);
  E(0, 0) = 1.0;
  E(1, 1) = 1.0;
  E(3, 2) = 1.0;
  Vec apex(4);
  apex << 0.0, 0.0, 1.0, 1.0;
  return ConvexBody::cone_join(base, E, apex);
}

// Hull of samples of the curve [t^4/24 : t^3/6 : t^2/2 : t : 1] plus its limit point e1.
ConvexBody sl5_orbit_hull(int count) {
  if (count < 4) throw Error(ErrorCode::InvalidInput, "sl5_orbit_hull needs at least 4 samples");
  const int M = count + 1;
  Mat V(5, M);
  for (int k = 0; k < count; ++k) {
    const double t = std::tan(std::numbers::pi * (k + 0.5) / count - std::numbers::pi / 2);
    Vec c(5);
    c << std::pow(t, 4) / 24.0, std::pow(t, 3) / 6.0, t * t / 2.0, t, 1.0;
    V.col(k) = c.normalized();
  }
  V.col(count) = Vec::Unit(5, 0);
  Vec patch = Vec::Zero(5);
  patch(0) = 1.0;
  patch(4) = 1.0;
  Mat Vn = V;
  for (int j = 0; j < M; ++j) Vn.col(j) /= patch.dot(V.col(j));
  const Vec witness = Vn.rowwise().mean();
  // Gale evenness for a cyclic 4-polytope on M points in curve order
  std::vector<std::array<int, 4>> sets;
  for (int i = 0; i + 1 < M; ++i)
    for (int j = i + 2; j + 1 < M; ++j) sets.push_back({i, i + 1, j, j + 1});
  for (int i = 1; i + 1 < M - 1; ++i) sets.push_back({0, i, i + 1, M - 1});
  Mat F(static_cast<Eigen::Index>(sets.size()), 5);
  for (size_t r = 0; r < sets.size(); ++r) {
    Mat S(4, 5);
    for (int a = 0; a < 4; ++a) S.row(a) = V.col(sets[r][a]).transpose();
    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullV);
    Vec eta = svd.matrixV().col(4);
    if (eta.dot(witness) < 0) eta = -eta;
    F.row(static_cast<Eigen::Index>(r)) = eta.transpose();
  }
  ConvexBody b = ConvexBody::orbit_hull(V, F, patch, witness);
  return b;
}

}  // namespace

ConvexBody make_example(const std::string& name, const nlohmann::json& params) {
  ConvexBody body = [&]() -> ConvexBody {
    if (name == "klein_ball") return klein_ball(int_param(params, "n", 2));
    if (name == "hex_simplex") return orthant(2);
    if (name == "simplex") return orthant(int_param(params, "n", 2));
    if (name == "square") return square();
    if (name == "cone_over_disc") return cone_over_disc();
    if (name == "pos_cone") return ConvexBody::pos_cone(int_param(params, "m", 2));
    if (name == "sl5_orbit_hull") return sl5_orbit_hull(int_param(params, "count", 200));
    if (name == "paraboloid") return paraboloid(int_param(params, "n", 2));
    throw Error(ErrorCode::UnknownExample, "unknown example '" + name + "'");
  }();
  nlohmann::json p = params.is_object() ? params : nlohmann::json::object();
  if (params.is_number_integer()) {
    const char* key = name == "pos_cone" ? "m" : name == "sl5_orbit_hull" ? "count" : "n";
    p[key] = params.get<int>();
  }
  return body.with_name(name).with_provenance({{"example", name}, {"params", p}});
}

ConvexBody make_example(const std::string& spec_string) {
  static const std::regex re(R"(^\s*([a-z_0-9]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec_string, m, re)) throw Error(ErrorCode::UnknownExample, "cannot parse example '" + spec_string + "'");
  if (m[2].matched) return make_example(m[1].str(), nlohmann::json(std::stoi(m[2].str())));
  return make_example(m[1].str(), nlohmann::json::object());
}

}  // namespace hilbert
