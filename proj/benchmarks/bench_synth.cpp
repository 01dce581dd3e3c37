#include <benchmark/benchmark.h>

#include "lpiso/isometry.hpp"
#include "lpiso/synth.hpp"

using namespace lpiso;

static void BM_SynthesizeStages(benchmark::State& state) {
    const Presentation D = standard_dyadic(Exponent(Rational(3)));
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_stages(D, n));
    }
}
BENCHMARK(BM_SynthesizeStages)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_DovetailOracle(benchmark::State& state) {
    const Exponent p(Rational(1));
    const Presentation O = oracle_only(from_generators(
        p, {StepFn::indicator(Rational(0), ratio(1, 2)), StepFn::indicator(ratio(1, 2), Rational(1))},
        "halves"));
    SynthOptions opt;
    opt.strategy = Strategy::Dovetail;
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_stages(O, 2, opt));
    }
}
BENCHMARK(BM_DovetailOracle)->Unit(benchmark::kMillisecond);

static void BM_IsometryHalfSwap(benchmark::State& state) {
    const Exponent p(Rational(state.range(0)));
    const Presentation A = standard_dyadic(p);
    const Presentation B = half_swapped_dyadic(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_isometry(A, B, 8, 4));
    }
}
BENCHMARK(BM_IsometryHalfSwap)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
