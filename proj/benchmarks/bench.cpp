#include <benchmark/benchmark.h>

#include "sdl/forms.hpp"
#include "sdl/maps.hpp"
#include "sdl/fields.hpp"
#include "sdl/potential.hpp"

namespace {

using namespace sdl;

void bm_exterior_derivative(benchmark::State& state) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    Form a = random_form(g, 1, 7);
    for (auto _ : state) benchmark::DoNotOptimize(d(a));
}
BENCHMARK(bm_exterior_derivative);

void bm_codifferential(benchmark::State& state) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    Form a = random_form(g, 2, 7);
    for (auto _ : state) benchmark::DoNotOptimize(codifferential(a));
}
BENCHMARK(bm_codifferential);

void bm_symplectic_energy(benchmark::State& state) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto m = hopf_map(g);
    for (auto _ : state) benchmark::DoNotOptimize(symplectic_energy(m));
}
BENCHMARK(bm_symplectic_energy);

void bm_symplectic_gradient(benchmark::State& state) {
    auto g = build_s3_grid(16, 16, 16, 1.0);
    auto m = perturbed_map(hopf_map(g), 0.05, 3);
    for (auto _ : state) benchmark::DoNotOptimize(grad_symplectic(m));
}
BENCHMARK(bm_symplectic_gradient);

void bm_hopf_invariant(benchmark::State& state) {
    auto g = build_s3_grid(12, 12, 12, 1.0);
    auto m = perturbed_map(hopf_map(g), 0.05, 3);
    for (auto _ : state) benchmark::DoNotOptimize(hopf_invariant(m).value);
}
BENCHMARK(bm_hopf_invariant);

} // namespace

BENCHMARK_MAIN();
