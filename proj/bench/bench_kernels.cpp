// Serial reference vs OpenMP kernels on fixed inputs. Arguments are the
// sample count m; the basis is 11 Bezier windows.

#include <benchmark/benchmark.h>

#include <vector>

#include "superdens/kernels.hpp"
#include "superdens/sample_lab.hpp"
#include "superdens/window_basis.hpp"

using namespace superdens;

namespace {

struct Inputs {
    WindowBasis basis;
    std::vector<double> xs;
    std::vector<double> v;
    DenseMatrix b;
    DenseMatrix d;
    std::vector<double> alpha;
};

Inputs make_inputs(std::size_t m) {
    const auto s = gen_bimodal(m, 1);
    WindowBasis basis = make_bezier_basis(extended_range(s.values(), 0.0), 10);
    std::vector<double> v(basis.size(), 0.3);
    DenseMatrix b;
    kernels::serial::design(basis, v, s.values(), b);
    DenseMatrix d;
    kernels::serial::gram(b, 1.0, d);
    std::vector<double> alpha(m, 1.0);
    return {std::move(basis), s.values(), std::move(v), std::move(b), std::move(d), std::move(alpha)};
}

template <Exec E>
void BM_design(benchmark::State& state) {
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    DenseMatrix b;
    for (auto _ : state) {
        kernels::design(E, in.basis, in.v, in.xs, b);
        benchmark::DoNotOptimize(b.data().data());
    }
}

template <Exec E>
void BM_gram(benchmark::State& state) {
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    DenseMatrix d;
    for (auto _ : state) {
        kernels::gram(E, in.b, 1.0, d);
        benchmark::DoNotOptimize(d.data().data());
    }
}

template <Exec E>
void BM_matvec(benchmark::State& state) {
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    std::vector<double> s(in.alpha.size());
    for (auto _ : state) {
        kernels::matvec(E, in.d, in.alpha, s);
        benchmark::DoNotOptimize(s.data());
    }
}

template <Exec E>
void BM_sweep(benchmark::State& state) {
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    const std::size_t m = in.alpha.size();
    std::vector<double> s(m);
    std::vector<double> e(m);
    kernels::serial::matvec(in.d, in.alpha, s);
    std::size_t k = 0;
    for (auto _ : state) {
        auto r = kernels::sweep(E, in.d, k, 1e-12, in.alpha, s, e);
        benchmark::DoNotOptimize(r);
        k = (k + 97) % m;
    }
}

}  // namespace

BENCHMARK(BM_design<Exec::Serial>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_design<Exec::Parallel>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_gram<Exec::Serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_gram<Exec::Parallel>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_matvec<Exec::Serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_matvec<Exec::Parallel>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_sweep<Exec::Serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_sweep<Exec::Parallel>)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
