// Factorized solve vs explicit inverse, and per-category attribution, on
// synthetic fixtures of growing size.

#include "mriofp/algebra.hpp"
#include "mriofp/indicators.hpp"
#include "mriofp/mrio.hpp"
#include "mriofp/scenario.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace mriofp;

namespace {

// fixture(regions, sectors): n = regions * sectors
void sizes(benchmark::internal::Benchmark* b) {
    for (auto [r, s] : {std::pair{2, 10}, {5, 20}, {10, 40}, {20, 40}}) b->Args({r, s});
}

struct Setup {
    MrioAccount account;
    TechnicalCoefficients a;
    Vector y;

    explicit Setup(const benchmark::State& state)
        : account(fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 7)),
          a(technical_coefficients(account.transactions, account.total_output)),
          y(select_demand(account, DemandSelection::consumption_of("R01"))) {}
};

void BM_FactorizeAndSolve(benchmark::State& state) {
    const Setup s(state);
    for (auto _ : state) {
        const LeontiefOperator op(s.a, LeontiefOperator::Mode::FactorizedSolve);
        benchmark::DoNotOptimize(op.apply(s.y));
    }
    state.counters["n"] = static_cast<double>(s.a.dim());
}

void BM_InvertAndMultiply(benchmark::State& state) {
    const Setup s(state);
    for (auto _ : state) {
        const LeontiefOperator op(s.a, LeontiefOperator::Mode::ExplicitInverse);
        benchmark::DoNotOptimize(op.apply(s.y));
    }
    state.counters["n"] = static_cast<double>(s.a.dim());
}

void BM_SolveReusingFactorization(benchmark::State& state) {
    const Setup s(state);
    const LeontiefOperator op(s.a, LeontiefOperator::Mode::FactorizedSolve);
    for (auto _ : state) benchmark::DoNotOptimize(op.apply(s.y));
}

void BM_CategoryAttribution(benchmark::State& state) {
    const Setup s(state);
    const auto& sectors = s.account.index.sectors();
    std::map<std::string, SpendingCategory> cat;
    for (std::size_t i = 0; i < sectors.size(); ++i) cat[sectors[i]] = all_categories()[i % (kCategoryCount - 1)];
    const CategoryConcordance conc(sectors, cat);
    const auto demand = consolidate_demand(s.account, DemandSelection::consumption_of("R01"));
    const Matrix columns = decompose_by_category(demand.spending, demand.gfcf, conc, s.account.index);
    const LeontiefOperator op(s.a);
    const Vector intensities = intensity(s.account.extensions.front().combined(), s.account.total_output);
    for (auto _ : state) benchmark::DoNotOptimize(attribute_by_category(intensities, op, columns));
}

}  // namespace

BENCHMARK(BM_FactorizeAndSolve)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_InvertAndMultiply)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SolveReusingFactorization)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CategoryAttribution)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
