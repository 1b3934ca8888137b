#include <benchmark/benchmark.h>

#include <memory>

#include "lawsonflow/flow.hpp"
#include "lawsonflow/profile.hpp"
#include "lawsonflow/specfn.hpp"
#include "lawsonflow/spectral.hpp"

using namespace lawson;

static void BM_KummerSeries(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kummer_m(0.3, 1.5, x));
}
BENCHMARK(BM_KummerSeries)->Arg(1)->Arg(10)->Arg(50);

static void BM_KummerPolynomial(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kummer_m(-l, 1.5, 3.7));
}
BENCHMARK(BM_KummerPolynomial)->Arg(2)->Arg(6)->Arg(20);

static void BM_LogBessel(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(log_bessel_i(2.5, x));
}
// Either side of the series/asymptotic switch.
BENCHMARK(BM_LogBessel)->Arg(5)->Arg(24)->Arg(26)->Arg(500);

static void BM_MinimalProfile(benchmark::State& state) {
  const ConeParams P = derive_cone_params(4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(minimal_profile(P, 1.0).tip_height);
}
BENCHMARK(BM_MinimalProfile)->Unit(benchmark::kMillisecond);

static void BM_GramMatrix(benchmark::State& state) {
  const ConeParams P = derive_cone_params(4, 4);
  for (auto _ : state) {
    const WeightedQuadrature q = make_weighted_quadrature(P);
    std::vector<Vec> phi;
    for (int j = 0; j < 7; ++j) phi.push_back(sample([&](double y) { return eigenfunction_eval(P, j, y); }, q.nodes));
    double s = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) s += inner_product_H(phi[i], phi[j], q);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_GramMatrix)->Unit(benchmark::kMillisecond);

static void BM_CoupledStep(benchmark::State& state) {
  const ConeParams P = derive_cone_params(4, 4);
  const SpectralExponents e = spectral_exponents(P, 4);
  const auto unit = std::make_shared<const ProfileSolution>(minimal_profile(P, 1.0));
  MeshConfig mesh;
  mesh.tip_nodes = mesh.ray_nodes = static_cast<std::size_t>(state.range(0));
  const FlowState st = initial_flow_state(assemble_initial_curve(P, e, {0, 0, 0, 0}, -1e-2, {}, unit, mesh), mesh);
  const double dt = 0.5 * st.scale() * st.scale();
  for (auto _ : state) benchmark::DoNotOptimize(coupled_step(st, dt).t);
}
BENCHMARK(BM_CoupledStep)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
