#include <benchmark/benchmark.h>

#include <memory>

#include "lbp/functionals.hpp"
#include "lbp/oracle.hpp"
#include "lbp/simulator.hpp"

using namespace lbp;

namespace {

std::shared_ptr<const RateModel> stock(double c) {
    FecEstParams p;
    p.dispersal = Kernel::box(3);
    p.establishment = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.fecundity = Kernel::from_weights(1, {0.5, 1.0, 0.5});
    p.c_fec = c;
    p.c_est = c;
    p.cap = 3;
    return std::make_shared<FecEstModel>(std::move(p));
}

void BM_StepFreeBranching(benchmark::State& state) {
    const auto model = std::make_shared<FreeBranchingModel>(Kernel::box(3), 3);
    Simulation sim(model, Configuration::singleton(3), 1);
    for (auto _ : state) benchmark::DoNotOptimize(sim.step().site);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepFreeBranching);

void BM_StepRegulated(benchmark::State& state) {
    Simulation sim(stock(0.5), Configuration::singleton(3), 1);
    for (auto _ : state) benchmark::DoNotOptimize(sim.step().site);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepRegulated);

void BM_RegulatedRateEval(benchmark::State& state) {
    const auto model = stock(0.5);
    Simulation sim(model, Configuration::singleton(3), 7);
    for (int i = 0; i < 5000; ++i) sim.step();
    const Configuration& config = sim.config();
    const int64_t tip = config.tip();
    for (auto _ : state) benchmark::DoNotOptimize(model->rate(tip + 1, config));
}
BENCHMARK(BM_RegulatedRateEval);

void BM_SeenFromTip(benchmark::State& state) {
    Simulation sim(stock(0.5), Configuration::singleton(3), 42);
    for (int i = 0; i < 5000; ++i) sim.step();
    const Configuration& config = sim.config();
    for (auto _ : state) benchmark::DoNotOptimize(config.seen_from_tip(3).values.size());
}
BENCHMARK(BM_SeenFromTip);

void BM_OracleTransient(benchmark::State& state) {
    const auto model = std::make_shared<FreeBranchingModel>(Kernel::box(1), 1);
    const auto chain = build_truncation(model, 3);
    const Configuration start = Configuration::singleton(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(transient(chain, start, 0.5, 1e-10).mean_tip);
}
BENCHMARK(BM_OracleTransient);

}  // namespace

BENCHMARK_MAIN();
