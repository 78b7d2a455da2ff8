#include <benchmark/benchmark.h>

#include "perflim/oracle.hpp"
#include "perflim/performance.hpp"
#include "perflim/state_space.hpp"

using namespace perflim;

namespace {

Polynomial spread_poles(int n) {
    std::vector<Complex> roots;
    for (int k = 0; k < n; ++k) roots.push_back(Complex(-1.0 - 0.3 * k, 0.0));
    return Polynomial::from_roots(roots);
}

Rational mk(std::initializer_list<double> n, std::initializer_list<double> d) {
    return Rational(Polynomial(n), Polynomial(d));
}

ChannelModel reference_channel() {
    ChannelModel ch;
    ch.F = RationalMatrix(mk({3.0}, {3.0, 1.0}));
    ch.H = RationalMatrix(mk({4.0}, {4.0, 1.0}));
    ch.sigma = Eigen::VectorXd::Constant(1, 1.0);
    ch.gamma = Eigen::VectorXd::Constant(1, 0.8);
    return ch;
}

RationalMatrix reference_plant() {
    return RationalMatrix(mk({-2.0, 1.0}, {0.0, 1.0, 1.0}));
}

void BM_PolyRoots(benchmark::State& state) {
    Polynomial p = spread_poles(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(p.roots());
}
BENCHMARK(BM_PolyRoots)->Arg(6)->Arg(12)->Arg(24);

void BM_H2Norm(benchmark::State& state) {
    Rational g(Polynomial{1.0, 0.5}, spread_poles(int(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(h2_norm(g));
}
BENCHMARK(BM_H2Norm)->Arg(6)->Arg(12)->Arg(24);

void BM_ClosedForm(benchmark::State& state) {
    RationalMatrix P = reference_plant();
    ChannelModel ch = reference_channel();
    for (auto _ : state)
        benchmark::DoNotOptimize(tracking_performance(P, ch, 0.5).j_star);
}
BENCHMARK(BM_ClosedForm);

void BM_FiniteBasis(benchmark::State& state) {
    OracleProblem prob = make_oracle_problem(reference_plant(), reference_channel(), 0.5);
    const int m = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_finite_basis(prob, m, 1.0).j_value);
}
BENCHMARK(BM_FiniteBasis)->Arg(8)->Arg(20);

} // namespace

BENCHMARK_MAIN();
