// Serial-reference vs OpenMP comparison for the batch kernels: objective
// accumulation over integration nodes, batch map evaluation, batch pointwise
// inversion, and reference sampling. Both paths share one code body and a
// fixed reduction order, so they are bit-identical; this target measures the
// speedup.

#include <benchmark/benchmark.h>

#include "trimap/direct_builder.hpp"
#include "trimap/map_template.hpp"
#include "trimap/rng.hpp"
#include "trimap/tri_solver.hpp"

using namespace trimap;

namespace {

TriangularMap make_map(int n, int degree, std::uint64_t seed) {
    auto t = MapTemplate::uniform(
        n, ComponentSpec{ComponentKind::IntegratedExponential, IndexSetKind::TotalOrder, degree});
    TriangularMap map = instantiate_identity(t, Direction::Direct);
    std::uint64_t ctr = 0;
    for (int k = 1; k <= n; ++k) {
        auto& comp = map.component(k);
        const std::size_t na = comp.intexp_a_set().size();
        std::vector<double> c(comp.coefficient_count());
        for (std::size_t j = 0; j < c.size(); ++j)
            c[j] = (j < na ? 0.5 : 0.1) * (2.0 * uniform_at(seed, 17, ctr++) - 1.0);
        comp.set_coefficients(c);
    }
    return map;
}

void bench_objective(benchmark::State& state, Exec mode) {
    const int n = 4;
    const GaussianTarget target = GaussianTarget::standard(n);
    const auto rule = make_integration_rule({IntegrationSpec::Kind::MonteCarlo, 0, 20000, 3}, n);
    const TriangularMap map = make_map(n, 2, 5);
    std::vector<double> grad(map.coefficient_count());
    for (auto _ : state) {
        const double v = direct_objective(map, target, rule, grad,
                                          ConstraintMode::MonotoneParam, 1e-6, mode);
        benchmark::DoNotOptimize(v);
    }
}

void bench_batch_evaluate(benchmark::State& state, Exec mode) {
    const int n = 6;
    const TriangularMap map = make_map(n, 3, 7);
    const SampleSet refs = sample_reference(50000, n, 3);
    SampleSet out(refs.count, n);
    for (auto _ : state) {
        for_each_index(
            refs.count, [&](std::size_t i) { map.evaluate(refs.row(i), out.row(i)); }, mode);
        benchmark::DoNotOptimize(out.data.data());
    }
}

void bench_batch_invert(benchmark::State& state, Exec mode) {
    const int n = 4;
    const TriangularMap map = make_map(n, 2, 9);
    SampleSet targets = sample_reference(2000, n, 4);
    for (std::size_t i = 0; i < targets.count; ++i) {
        auto row = targets.row(i);
        const auto y = map.evaluate(row);
        for (int j = 0; j < n; ++j) row[j] = y[j];
    }
    for (auto _ : state) {
        const auto result = push_inverse(map, targets, InvertOptions{.tol = 1e-10}, mode);
        benchmark::DoNotOptimize(result.points.data.data());
    }
}

void bench_sampling(benchmark::State& state, Exec mode) {
    for (auto _ : state) {
        const SampleSet s = sample_reference(1000000, 4, 11, mode);
        benchmark::DoNotOptimize(s.data.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(bench_objective, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_objective, openmp, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_batch_evaluate, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_batch_evaluate, openmp, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_batch_invert, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_batch_invert, openmp, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_sampling, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_sampling, openmp, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
