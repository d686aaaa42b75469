#include <benchmark/benchmark.h>

#include "amencert/certificates.hpp"

using namespace amencert;

namespace {

void BM_BallZ2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Group g = Group::parse("Z^2");  // fresh group: cold ball cache
        benchmark::DoNotOptimize(g.ball(n)->size());
    }
}
BENCHMARK(BM_BallZ2)->Arg(4)->Arg(8)->Arg(16);

void BM_BallF2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Group g = Group::parse("F_2");
        benchmark::DoNotOptimize(g.ball(n)->size());
    }
}
BENCHMARK(BM_BallF2)->Arg(3)->Arg(5)->Arg(7);

void BM_FolnerFloatZ2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Group g = Group::parse("Z^2");
    CompactSpace pt = CompactSpace::point(g);
    CertOptions opts;
    opts.mode = NumericMode::Float;
    for (auto _ : state) {
        auto cert = folner_optimize(g, pt, n, opts);
        benchmark::DoNotOptimize(cert.defect);
    }
}
BENCHMARK(BM_FolnerFloatZ2)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_FolnerExactZ(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Group g = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(g);
    for (auto _ : state) {
        auto cert = folner_optimize(g, pt, n);
        benchmark::DoNotOptimize(cert.defect);
    }
}
BENCHMARK(BM_FolnerExactZ)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PonziExactF2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Group g = Group::parse("F_2");
    CompactSpace pt = CompactSpace::point(g);
    for (auto _ : state) {
        auto res = ponzi_optimize(g, pt, n);
        benchmark::DoNotOptimize(res.cert->norm_bound);
    }
}
BENCHMARK(BM_PonziExactF2)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_BoundaryDefectClosed(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        BoundaryFolner bf(2, n);
        benchmark::DoNotOptimize(bf.defect());
    }
}
BENCHMARK(BM_BoundaryDefectClosed)->Arg(5)->Arg(10)->Arg(20);

void BM_BoundaryDefectExplicit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    BoundaryFolner bf(2, n);
    RChain chain = bf.materialize();
    for (auto _ : state) {
        benchmark::DoNotOptimize(chain_defect(chain));
    }
}
BENCHMARK(BM_BoundaryDefectExplicit)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TentMaterialize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Group g = Group::parse("F_2");
    TentSequence tent(g, g.from_string("a"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tent.materialize(n).entries().size());
    }
}
BENCHMARK(BM_TentMaterialize)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
