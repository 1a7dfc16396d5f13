#include <benchmark/benchmark.h>

#include <modloc/modular.hpp>
#include <modloc/realspace.hpp>
#include <modloc/regionexpr.hpp>
#include <modloc/rng.hpp>
#include <modloc/scalarmodel.hpp>

using namespace modloc;

namespace {

RealProjection random_projection(Rng& rng, const ComplexSpace& space,
                                 int dim) {
  return projector_from_span(space, rng.gaussian(space.real_dim(), dim));
}

void BM_join(benchmark::State& state) {
  const ComplexSpace space(static_cast<int>(state.range(0)));
  Rng rng(1);
  const RealProjection e = random_projection(rng, space, space.complex_dim());
  const RealProjection f = random_projection(rng, space, space.complex_dim());
  for (auto _ : state) benchmark::DoNotOptimize(join(e, f));
}

void BM_modular_data(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexSpace space(n);
  Rng rng(2);
  Mat basis = orthonormal_span(rng.gaussian(2 * n, n));
  while (basis.cols() != n ||
         !complex_core_hull(RealSubspace(space, basis)).standard)
    basis = orthonormal_span(rng.gaussian(2 * n, n));
  const StandardSubspace h{RealSubspace(space, basis)};
  for (auto _ : state)
    benchmark::DoNotOptimize(modular_data(h, [](const std::string&) {}));
}

void BM_causal_complement(benchmark::State& state) {
  std::vector<SpatialInterval> family;
  double cursor = 0.0;
  for (int i = 0; i < state.range(0); ++i) {
    family.push_back({cursor, cursor + 1.0});
    cursor += 2.5;
  }
  const CausalRegion o = spatial_completion(family);
  for (auto _ : state) benchmark::DoNotOptimize(causal_complement(o));
}

void BM_local_subspace(benchmark::State& state) {
  const PositionModel model(static_cast<int>(state.range(0)), 0.05, 1.0);
  const SiteSet region =
      SiteSet::interval(model.sites() / 4, model.sites() / 4 + 40);
  for (auto _ : state)
    benchmark::DoNotOptimize(local_subspace(model, region));
}

void BM_cluster_norm(benchmark::State& state) {
  const PositionModel model(static_cast<int>(state.range(0)), 0.05, 1.0);
  const int n = model.sites();
  const RealProjection e =
      local_subspace(model, SiteSet::interval(n / 8, n / 8 + 32));
  const RealProjection f =
      local_subspace(model, SiteSet::interval(n / 2, n / 2 + 32));
  for (auto _ : state) benchmark::DoNotOptimize(cross_norm(e, f));
}

void BM_region_parse(benchmark::State& state) {
  const std::string text =
      "((c([0,1]) | c([2,3]))'' & W') + (0.5, -1) boost(0.3)";
  for (auto _ : state) benchmark::DoNotOptimize(parse_region(text));
}

}  // namespace

BENCHMARK(BM_join)->Arg(32)->Arg(128);
BENCHMARK(BM_modular_data)->Arg(8)->Arg(32);
BENCHMARK(BM_causal_complement)->Arg(4)->Arg(64);
BENCHMARK(BM_local_subspace)->Arg(256)->Arg(1024);
BENCHMARK(BM_cluster_norm)->Arg(256)->Arg(1024);
BENCHMARK(BM_region_parse);

BENCHMARK_MAIN();
