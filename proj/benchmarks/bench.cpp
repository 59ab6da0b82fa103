#include <ebil/cayley.hpp>
#include <ebil/closedform.hpp>
#include <ebil/polyform.hpp>
#include <ebil/simulator.hpp>

#include <benchmark/benchmark.h>

using namespace ebil;

namespace {

MergedSpectrum<Rational> spectrum_period3() {
    return MergedSpectrum<Rational>::from_gammas({Rational(9), Rational(4), Rational(1)});
}

void BM_taylor_coeffs(benchmark::State& state) {
    std::vector<Rational> gammas{Rational(9), Rational(4), Rational(1), Rational(0)};
    auto l = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto f = taylor_coeffs(gammas, l);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_taylor_coeffs)->Arg(8)->Arg(32)->Arg(128);

void BM_rank_exact(benchmark::State& state) {
    auto spec = MergedSpectrum<Rational>::from_gammas(
        {Rational(33), Rational(32), Rational(25), Rational(23), Rational(7)});
    auto m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto verdict = cayley_condition(spec, m);
        benchmark::DoNotOptimize(verdict);
    }
}
BENCHMARK(BM_rank_exact)->Arg(4)->Arg(8)->Arg(16);

void BM_certificate(benchmark::State& state) {
    auto spec = spectrum_period3();
    for (auto _ : state) {
        auto cert = certificate_from_nullspace(spec, 3);
        benchmark::DoNotOptimize(cert);
    }
}
BENCHMARK(BM_certificate);

void BM_reflect_step(benchmark::State& state) {
    Ellipsoid<double> e({0.25, 1.0, 4.0});
    auto cons = construct_m_eq_n(e);
    auto s = launch_tangent(e, *cons.caustics, 1);
    for (auto _ : state) {
        auto cur = s;
        for (int k = 0; k < 64; ++k) cur = reflect_step(e, cur).first;
        benchmark::DoNotOptimize(cur);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_reflect_step);

void BM_rotation_number(benchmark::State& state) {
    for (auto _ : state) {
        double rho = rotation_number(4.0, 1.0, 0.37);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(BM_rotation_number);

}  // namespace
