#include <benchmark/benchmark.h>

#include "lpiso/lattice.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/witness.hpp"

using namespace lpiso;

static void BM_ExtendDenseThird(benchmark::State& state) {
    // chi_[0,1/3) against dyadic intervals only: pure approximation.
    const Exponent p(Rational(1));
    const StepFn target = StepFn::indicator(Rational(0), ratio(1, 3));
    const long k = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extend_dense({}, {target}, k, dyadic_interval, p));
    }
}
BENCHMARK(BM_ExtendDenseThird)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BestWitnessDense(benchmark::State& state) {
    // Overlapping columns force the general solver.
    const Exponent p(Rational(3));
    const long n = state.range(0);
    NodeMap psi;
    for (long j = 0; j < n; ++j) {
        psi[Node{static_cast<std::uint32_t>(j)}] =
            StepFn::indicator(ratio(j, 2 * n), ratio(j + n, 2 * n), ComplexRational(1, ratio(j, n)));
    }
    const StepFn v = StepFn::indicator(Rational(0), ratio(2, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(best_witness(v, psi, p, 30));
    }
}
BENCHMARK(BM_BestWitnessDense)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
