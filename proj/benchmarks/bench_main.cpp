#include <krylov/algebra.hpp>
#include <krylov/bch.hpp>
#include <krylov/coherent.hpp>
#include <krylov/lanczos.hpp>

#include <benchmark/benchmark.h>

using namespace krylov;

// Eigendecomposition plus one application, the oracle's unit of work.
static void BM_EvolveState(benchmark::State& state) {
	const auto dim = static_cast<std::size_t>(state.range(0));
	const TruncationConfig cfg{dim, 1e-6};
	const OperatorMatrix L = build_liouvillian({1.0, 1.0}, cfg);
	for (auto _ : state) {
		const HermitianPropagator prop(L);
		benchmark::DoNotOptimize(evolve_state(prop, 0.5, FockVector::basis(dim, 0), cfg));
	}
}
BENCHMARK(BM_EvolveState)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

// Closed-form amplitudes; |w| sets the series length.
static void BM_PhiSeries(benchmark::State& state) {
	const double r = static_cast<double>(state.range(0)) / 4.0;
	const auto p = DisplacementParams::make(cplx(1.0, 0.5), cplx(0.0, r));
	for (auto _ : state)
		benchmark::DoNotOptimize(phi_series(p));
}
BENCHMARK(BM_PhiSeries)->DenseRange(1, 12, 1);

static void BM_Lanczos(benchmark::State& state) {
	const auto m = static_cast<std::size_t>(state.range(0));
	const TruncationConfig cfg{256};
	const OperatorMatrix L = build_liouvillian({1.0, 1.0}, cfg);
	for (auto _ : state)
		benchmark::DoNotOptimize(lanczos_tridiagonalize(L, FockVector::basis(256, 0), m));
}
BENCHMARK(BM_Lanczos)->Arg(40)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State& state) {
	for (auto _ : state)
		benchmark::DoNotOptimize(decompose_exponential({1.0, 1.0}, 2.0));
}
BENCHMARK(BM_Decompose);

static void BM_ClosedFormParams(benchmark::State& state) {
	for (auto _ : state)
		benchmark::DoNotOptimize(closed_form_params({1.0, 1.0}, 2.0));
}
BENCHMARK(BM_ClosedFormParams);
BENCHMARK_MAIN();
