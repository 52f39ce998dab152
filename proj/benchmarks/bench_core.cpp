#include "hilbert/hilbert.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace hilbert;

namespace {

Vec affine(double x, double y) {
  Vec X(3);
  X << x, y, 1.0;
  return X;
}

Mat boost(double a) {
  Mat A = Mat::Identity(3, 3);
  A(0, 0) = A(2, 2) = std::cosh(a);
  A(0, 2) = A(2, 0) = std::sinh(a);
  return A;
}

void BM_DistanceKlein(benchmark::State& state) {
  const ConvexBody b = make_example("klein_ball(2)");
  const Vec x = affine(0.1, 0.2), y = affine(-0.5, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_distance(b, x, y));
}
BENCHMARK(BM_DistanceKlein);

void BM_DistancePolytope(benchmark::State& state) {
  const ConvexBody b = make_example("simplex(" + std::to_string(state.range(0)) + ")");
  Rng rng(1);
  const Vec x = sample_interior(b, rng), y = sample_interior(b, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_distance(b, x, y));
}
BENCHMARK(BM_DistancePolytope)->Arg(2)->Arg(4)->Arg(8);

void BM_DistanceOrbitHull(benchmark::State& state) {
  const ConvexBody b = make_example("sl5_orbit_hull", {{"count", 60}});
  Rng rng(2);
  const Vec x = sample_interior(b, rng), y = sample_interior(b, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_distance(b, x, y));
}
BENCHMARK(BM_DistanceOrbitHull);

void BM_Classify(benchmark::State& state) {
  const ConvexBody b = make_example("klein_ball(2)");
  const ProjMap A(boost(0.7));
  for (auto _ : state) benchmark::DoNotOptimize(classify(b, A));
}
BENCHMARK(BM_Classify);

void BM_EmpiricalTranslationLength(benchmark::State& state) {
  const ConvexBody b = make_example("klein_ball(2)");
  const ProjMap A(boost(0.7));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_translation_length(b, A, state.range(0), 1));
}
BENCHMARK(BM_EmpiricalTranslationLength)->Arg(500)->Arg(2000);

void BM_Busemann(benchmark::State& state) {
  const ConvexBody P = make_example("paraboloid(2)");
  const ParabolicChart c = make_chart(P, ProjPoint(Vec::Unit(3, 0)));
  const ProjPoint q(Vec(Eigen::Vector3d(1.3, 0.4, 1.0)));
  for (auto _ : state) benchmark::DoNotOptimize(busemann(c, q).value);
}
BENCHMARK(BM_Busemann);

void BM_BusemannVolume(benchmark::State& state) {
  const ConvexBody k = make_example("klein_ball(2)");
  const Vec C = k.witness();
  const auto box = hilbert_ball_box(k, ProjPoint(C), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(busemann_volume(
        k, [&](const Vec& X) { return hilbert_distance(k, C, X) <= 1.0; }, box.first, box.second, state.range(0), 1));
}
BENCHMARK(BM_BusemannVolume)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_CharacteristicFunction(benchmark::State& state) {
  const ConvexBody o = make_example("simplex(2)");
  const CharacteristicFunction f(o, state.range(0), 1);
  const Vec x = Vec(Eigen::Vector3d(1.0, 2.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(f(x).estimate);
}
BENCHMARK(BM_CharacteristicFunction)->Arg(10000)->Arg(100000);

void BM_TriangleThinness(benchmark::State& state) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::array<ProjPoint, 3> v;
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 3.0;
    v[static_cast<size_t>(i)] = ProjPoint(affine(0.99 * std::cos(a), 0.99 * std::sin(a)));
  }
  const StraightTriangle T{v[0], v[1], v[2]};
  for (auto _ : state)
    benchmark::DoNotOptimize(triangle_thinness(k, T, ThinnessOptions{static_cast<int>(state.range(0))}).delta);
}
BENCHMARK(BM_TriangleThinness)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EnumerateBall(benchmark::State& state) {
  Mat R = Mat::Identity(3, 3);
  R(0, 0) = R(1, 1) = std::cos(1.0);
  R(0, 1) = -std::sin(1.0);
  R(1, 0) = std::sin(1.0);
  const std::vector<ProjMap> gens = {ProjMap(boost(1.2)), ProjMap(Mat(R * boost(1.2) * R.transpose()))};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_ball(gens, static_cast<int>(state.range(0))).elements.size());
}
BENCHMARK(BM_EnumerateBall)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
