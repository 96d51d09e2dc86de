#include <numbers>

#include <benchmark/benchmark.h>

#include "geoconn/connector.hpp"
#include "geoconn/dsl.hpp"
#include "geoconn/geodesic.hpp"
#include "geoconn/jacobi.hpp"
#include "geoconn/models.hpp"

using namespace geoconn;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

void BM_ExpSphere(benchmark::State& state) {
  const auto m = make_model("sphere2");
  const Vec p = v2(1.2, 0.3), v = v2(0.4, 2.1);
  for (auto _ : state) benchmark::DoNotOptimize(exp_map(*m, p, v));
}
BENCHMARK(BM_ExpSphere);

void BM_ExpParaboloid(benchmark::State& state) {
  const auto m = make_model("paraboloid");
  const Vec p = v2(0.3, 0.1), v = v2(1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(exp_map(*m, p, v));
}
BENCHMARK(BM_ExpParaboloid);

void BM_DexpSphere(benchmark::State& state) {
  const auto m = make_model("sphere2");
  const Vec p = v2(1.2, 0.3), v = v2(0.4, 2.1);
  for (auto _ : state) benchmark::DoNotOptimize(dexp_matrix(*m, p, v));
}
BENCHMARK(BM_DexpSphere);

void BM_DexpDeSitter(benchmark::State& state) {
  const auto m = make_model("desitter");
  const Vec p = v2(0, 0), v = v2(1.5, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(dexp_matrix(*m, p, v));
}
BENCHMARK(BM_DexpDeSitter);

void BM_FirstConjugateTimeSphere(benchmark::State& state) {
  const auto m = make_model("sphere2");
  const Vec p = v2(kPi / 2, 0), u = v2(0.6, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(first_conjugate_time(*m, p, u, 4.0));
}
BENCHMARK(BM_FirstConjugateTimeSphere);

void BM_ConnectSphereLocalLog(benchmark::State& state) {
  const auto m = make_model("sphere2");
  const Vec p = v2(1.2, 0.3), q = v2(1.6, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(connect(m, p, q));
}
BENCHMARK(BM_ConnectSphereLocalLog)->Unit(benchmark::kMillisecond);

void BM_LiftSphereSegment(benchmark::State& state) {
  const auto m = make_model("sphere2");
  const Vec p = v2(kPi / 2, 0), q = v2(kPi / 2, 2.8);
  const TargetPath path = chart_segment(*m, p, q);
  const Vec zero = Vec::Zero(2);
  for (auto _ : state) benchmark::DoNotOptimize(lift_path(*m, p, path, zero, {}));
}
BENCHMARK(BM_LiftSphereSegment)->Unit(benchmark::kMillisecond);

void BM_DslEval(benchmark::State& state) {
  const dsl::Expr e = dsl::parse("sin(x1)^2 + exp(-x2/3) * sqrt(1 + x1^2)", 2);
  const Vec x = v2(0.7, 1.3);
  for (auto _ : state) benchmark::DoNotOptimize(e.eval(x));
}
BENCHMARK(BM_DslEval);

}  // namespace
BENCHMARK_MAIN();
