#include <benchmark/benchmark.h>

#include <random>

#include "anisomin/fixtures.hpp"
#include "anisomin/gauss_analysis.hpp"
#include "anisomin/graph_solver.hpp"
#include "anisomin/integrand.hpp"
#include "anisomin/spectrum.hpp"

using namespace anisomin;

namespace {

void BM_GammaJet(benchmark::State& state) {
    const IntegrandSpec spec = state.range(0) == 0   ? IntegrandSpec::constant(1)
                               : state.range(0) == 1 ? IntegrandSpec::ellipsoid(1, 1, 2)
                                                     : IntegrandSpec::spherical_harmonic(4, 2, 0.02);
    std::mt19937 rng(1);
    std::normal_distribution<double> n;
    std::vector<Vec3> xs(1024);
    for (auto& x : xs) x = Vec3(n(rng), n(rng), n(rng)).normalized();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_bar_jet(spec, xs[i++ & 1023]));
    }
}
BENCHMARK(BM_GammaJet)->Arg(0)->Arg(1)->Arg(2);

void BM_CurvatureField(benchmark::State& state) {
    const SurfacePatch p = catenoid_patch(2.0, static_cast<int>(state.range(0)));
    const IntegrandSpec spec = IntegrandSpec::ellipsoid(1, 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(curvature_field(p, spec));
}
BENCHMARK(BM_CurvatureField)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SolveGraph(benchmark::State& state) {
    GraphProblem p;
    p.domain = {1.2, 2.0, -0.4, 0.4};
    p.nx = p.ny = static_cast<int>(state.range(0));
    p.boundary_data = catenoid_graph_height;
    for (auto _ : state) benchmark::DoNotOptimize(solve_graph(p));
}
BENCHMARK(BM_SolveGraph)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_DirichletEigs(benchmark::State& state) {
    const JacobiDiscretization d = assemble(catenoid_patch(3.0, static_cast<int>(state.range(0))), IntegrandSpec::constant(1));
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_eigs(d, 12));
}
BENCHMARK(BM_DirichletEigs)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Pseudograph(benchmark::State& state) {
    const SurfacePatch p = catenoid_patch(2.0, static_cast<int>(state.range(0)));
    const IntegrandSpec spec = IntegrandSpec::constant(1);
    for (auto _ : state) benchmark::DoNotOptimize(pseudograph_extract(p, spec, Vec3::UnitZ(), 0));
}
BENCHMARK(BM_Pseudograph)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
