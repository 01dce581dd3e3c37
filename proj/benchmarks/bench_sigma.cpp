#include <benchmark/benchmark.h>

#include "lpiso/sigma.hpp"

using namespace lpiso;

namespace {

StepFn comb(long cells, long offset) {
    std::vector<StepFn::Piece> pieces;
    for (long c = 0; c < cells; ++c) {
        pieces.push_back({ratio(c, cells), ratio(c + 1, cells),
                          ComplexRational(ratio((c * 7 + offset) % 11 - 5, 4), ratio(c % 3, 2))});
    }
    return StepFn::from_pieces(pieces);
}

}  // namespace

static void BM_SigmaScalar(benchmark::State& state) {
    const Exponent p(ratio(3, 2));
    const ComplexRational z(ratio(1, 3), 1);
    const ComplexRational w(ratio(-2, 5), ratio(1, 7));
    const long k = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma_scalar(z, w, p, k));
    }
}
BENCHMARK(BM_SigmaScalar)->Arg(30)->Arg(60)->Arg(120);

static void BM_SigmaVec(benchmark::State& state) {
    const Exponent p(Rational(3));
    const StepFn f = comb(state.range(0), 1);
    const StepFn g = comb(state.range(0), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sigma_vec(f, g, p, 30));
    }
}
BENCHMARK(BM_SigmaVec)->Arg(8)->Arg(64)->Arg(512);

static void BM_NormP(benchmark::State& state) {
    const Exponent p(ratio(3, 2));
    const StepFn f = comb(64, 2);
    const long k = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.norm(p, k));
    }
}
BENCHMARK(BM_NormP)->Arg(20)->Arg(40)->Arg(80);

BENCHMARK_MAIN();
