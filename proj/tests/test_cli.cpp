#include "cli.hpp"
#include "hilbert/hilbert.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using hilbert::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json result() const { return json::parse(out); }
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = hilbert::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("hilbert_cli_" + name);
  std::ofstream(path) << contents;
  return path;
}

std::string klein_scene() {
  return hilbert::scene_from_body(hilbert::make_example("klein_ball(2)")).dump();
}

}  // namespace

TEST(Cli, DistanceFromSceneFile) {
  const auto scene = temp_file("klein2.json", klein_scene());
  const Outcome r = run({"distance", "--scene", scene.string(), "--from", "[0,0]", "--to", "[0.5,0]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.result()["distance"].get<double>(), std::log(3.0), 1e-12);
  EXPECT_EQ(r.result()["config"]["command"], "distance");
}

TEST(Cli, ClassifyBoostAndParabolic) {
  const Outcome h = run({"classify", "--scene", klein_scene(), "--matrix", "[[1.25,0,0.75],[0,1,0],[0.75,0,1.25]]", "--budget", "64"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(h.result()["kind"], "hyperbolic");
  EXPECT_NEAR(h.result()["t"].get<double>(), std::log(4.0), 1e-9);
  EXPECT_TRUE(h.result().contains("empirical_translation_length"));

  const Outcome p = run({"classify", "--scene", "paraboloid(2)", "--matrix", "[[1,1,0.5],[0,1,1],[0,0,1]]"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.result()["kind"], "parabolic");
  EXPECT_TRUE(p.result()["jnf"]["pass"].get<bool>());
}

TEST(Cli, DemoReportsResiduals) {
  for (const char* n : {"1", "2", "3"}) {
    const Outcome r = run({"demo", "ellipsoid-characterization", "--n", n});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.result()["all_orbit_points_on_paraboloid"].get<bool>());
    EXPECT_TRUE(r.result()["ball_images_on_sphere"].get<bool>());
  }
}

TEST(Cli, EveryCommandRuns) {
  const std::string k = klein_scene();
  const std::vector<std::vector<std::string>> cmds = {
      {"ball", "--scene", k, "--center", "[0.1,0]", "--radius", "1", "--samples", "16"},
      {"horosphere", "--scene", "paraboloid(2)", "--p", "[1,0,0]", "--q", "[0.5,0.2,1]"},
      {"horosphere", "--scene", "paraboloid(2)", "--p", "[1,0,0]", "--level", "1", "--grid", "5"},
      {"busemann", "--scene", "paraboloid(2)", "--p", "[1,0,0]", "--q", "[1,0.3,1]"},
      {"dual", "--scene", "square"},
      {"charfun", "--scene", "hex_simplex", "--x", "[1,1,1]", "--samples", "2000"},
      {"volume", "--scene", k, "--center", "[0,0]", "--radius", "1", "--samples", "2000"},
      {"thinness", "--scene", k, "--triangle", "[[0.5,0],[-0.2,0.4],[-0.2,-0.4]]"},
      {"petsearch", "--scene", "hex_simplex", "--delta", "3"},
      {"thinpart", "--scene", k, "--group", R"({"generators":[[[1.0200667556190759,0,0.201336002541094],[0,1,0],[0.201336002541094,0,1.0200667556190759]]]})", "--grid", "5"},
  };
  for (const auto& c : cmds) {
    const Outcome r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << ": " << r.err;
    if (r.code == 0) EXPECT_TRUE(r.result().contains("config")) << c[0];
  }
}

TEST(Cli, BusemannMatchesClosedForm) {
  const Outcome r = run({"busemann", "--scene", "paraboloid(2)", "--p", "[1,0,0]", "--q", "[1,0.3,1]", "--tmax", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.result()["value"].get<double>(), r.result()["closed_form"].get<double>(), 1e-4);
}

TEST(Cli, CsvGoesToOut) {
  const auto path = std::filesystem::temp_directory_path() / "hilbert_cli_ball.csv";
  std::filesystem::remove(path);
  const Outcome r = run({"ball", "--scene", "klein_ball(2)", "--center", "[0,0]", "--radius", "1", "--samples", "8", "--out",
                     path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.result().contains("points"));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("x0,x1,x2", 0), 0u) << header;
  EXPECT_EQ(r.result()["config"]["out"], path.string());
}

TEST(Cli, ConfigEchoesTolerances) {
  const Outcome r = run({"distance", "--scene", "klein_ball(2)", "--from", "[0,0]", "--to", "[0.5,0]", "--tol.boundary_band=1e-9",
                     "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.result()["config"]["seed"], 7);
  EXPECT_DOUBLE_EQ(r.result()["config"]["tolerances"]["boundary_band"].get<double>(), 1e-9);
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"distance", "--scene", "klein_ball(2)", "--from", "[0,0]"}).code, 2);
  EXPECT_EQ(run({"distance", "--scene", "klein_ball(2)", "--from", "[0,0]", "--to", "[2,0]"}).code, 2);
  EXPECT_EQ(run({"distance", "--scene", "{not json", "--from", "[0,0]", "--to", "[0.1,0]"}).code, 2);
  EXPECT_EQ(run({"distance", "--scene", "klein_ball(2)", "--from", "[0,0]", "--to", "[0.1,0]", "--tol.pet=1"}).code, 2);
  EXPECT_EQ(run({"distance", "--scene", "klein_ball(2)", "--from", "[0,0]", "--to", "[0.1,0]", "--tol.boundary_band=-1"}).code, 2);
  EXPECT_EQ(run({"classify", "--scene", "klein_ball(2)", "--matrix", "[[2,0,0],[0,1,0],[0,0,1]]"}).code, 2);
  const Outcome r = run({"thinness", "--scene", "klein_ball(2)", "--triangle", "[[0,0],[0.1,0.1],[0.2,0.2]]"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, NumericalFailureExitsThree) {
  // two generic generators overflow the ball enumeration guard long before L = 12
  const Outcome r = run({"thinpart", "--scene", "klein_ball(2)", "--group",
                     R"({"generators":[[[1.3,0.2,0.1],[0.4,1.1,0.3],[0.2,0.5,1.4]],[[1.1,0.7,0.2],[0.3,1.2,0.6],[0.5,0.1,1.3]]]})",
                     "--L", "12"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::string> args = {"volume", "--scene", "klein_ball(2)", "--center", "[0,0]", "--radius", "1",
                                         "--samples", "5000", "--seed", "42"};
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const std::vector<std::string> p = {"petsearch", "--scene", "klein_ball(2)", "--delta", "3", "--budget", "40", "--seed", "9"};
  EXPECT_EQ(run(p).out, run(p).out);
}
