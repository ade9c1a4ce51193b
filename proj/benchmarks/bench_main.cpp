#include <benchmark/benchmark.h>

#include "hspace/builtins.hpp"
#include "hspace/calderbank.hpp"
#include "hspace/halton.hpp"
#include "hspace/twistor.hpp"

using namespace hspace;

namespace {

const MetricChart& hyperbolic4() {
    static const MetricChart m = [] {
        MetricChart c = builtin_metric("hyperbolic-4");
        c.domain.lo = {-1.0, -1.0, -1.0, 0.15};
        return c;
    }();
    return m;
}

void BM_EvalJetExpression(benchmark::State& state) {
    const ExprPtr e = parse_expression("exp(2*x1)*sin(x2*x3) + sqrt(1 + x4^2)/(2 + x1^2)");
    const std::vector<double> p{0.3, -0.4, 0.8, 0.5};
    const JetEnv env = chart_env({"x1", "x2", "x3", "x4"}, p);
    for (auto _ : state) benchmark::DoNotOptimize(eval_jet(e, env));
}
BENCHMARK(BM_EvalJetExpression);

void BM_Christoffel(benchmark::State& state) {
    const std::vector<double> p{0.2, -0.3, 0.4, 0.9};
    for (auto _ : state) benchmark::DoNotOptimize(christoffel(hyperbolic4(), p));
}
BENCHMARK(BM_Christoffel);

void BM_EinsteinResidual(benchmark::State& state) {
    const std::vector<double> p{0.2, -0.3, 0.4, 0.9};
    for (auto _ : state) benchmark::DoNotOptimize(einstein_residual(hyperbolic4(), p));
}
BENCHMARK(BM_EinsteinResidual);

void BM_WeylSplit(benchmark::State& state) {
    const std::vector<double> p{0.2, -0.3, 0.4, 0.9};
    for (auto _ : state) benchmark::DoNotOptimize(weyl_split(hyperbolic4(), p));
}
BENCHMARK(BM_WeylSplit);

void BM_InvertIncidence(benchmark::State& state) {
    const SurfacePatch& s = builtin_surface("model-rotational");
    const std::array<double, 4> x{0.3, -0.2, 0.5, 0.6};
    for (auto _ : state)
        benchmark::DoNotOptimize(invert_incidence(s, x, {Complex(0.3, 0.8), Complex(1.0, -0.8)}));
}
BENCHMARK(BM_InvertIncidence);

void BM_SubmersionJets(benchmark::State& state) {
    static const SurfaceSubmersion sub = SurfaceSubmersion::build(
        builtin_surface("model-rotational"), builtin_seeds("model-rotational"));
    const MapFunction phi = sub.map4();
    const std::vector<double> x{0.3, -0.2, 0.5, 0.6};
    for (auto _ : state) benchmark::DoNotOptimize(phi(x));
}
BENCHMARK(BM_SubmersionJets);

void BM_CalderbankAssembly(benchmark::State& state) {
    const WeylStructure& w = builtin_weyl("round-s3");
    for (auto _ : state) benchmark::DoNotOptimize(calderbank_metric(w));
}
BENCHMARK(BM_CalderbankAssembly);

}  // namespace

BENCHMARK_MAIN();
